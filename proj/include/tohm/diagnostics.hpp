#pragma once

// Diagnostics for the equivalence between the upcrossing bound and the
// Bonferroni correction: the normalized score sequence, its replicate-wise
// covariance, the Berman-condition curve sup |rho| log(tau), and
// Bonferroni-to-bound ratio curves across resolutions.

#include <cstdint>
#include <vector>

#include "tohm/grid.hpp"
#include "tohm/model.hpp"
#include "tohm/montecarlo.hpp"

namespace tohm {

// Normalized score at each grid point: the eta-score at (eta0, null MLE)
// divided by the square root of the observed efficient information
// (eta-curvature adjusted for the null parameters). Entries where the
// information estimate is not positive come back NaN.
std::vector<double> score_sequence(const SubTestModel& model,
                                   const Dataset& data, const ScanGrid& grid);

struct ScoreCovariance {
  std::vector<double> grid_points;
  std::vector<double> cov;   // R x R row-major correlation estimate
  std::vector<bool> valid;   // per grid point
  std::size_t n_replicates = 0;
};

ScoreCovariance estimate_score_covariance(const SubTestModel& model,
                                          const ScanGrid& grid,
                                          const McSettings& settings);

struct BermanRow {
  double tau;
  double value;  // sup over pairs farther than tau of |rho| * log(tau)
};

// tau ladder starts past 1 (log tau > 0) and stops at the largest pairwise
// distance.
std::vector<BermanRow> berman_curve(const ScoreCovariance& cov,
                                    std::size_t n_tau = 40);

std::vector<BermanRow> berman_curve(const SubTestModel& model,
                                    const ScanGrid& grid,
                                    const McSettings& settings,
                                    std::size_t n_tau = 40);

struct RatioRow {
  double c;
  double sigma;       // TOHM significance at this threshold
  std::size_t resolution;
  double ratio;       // Bonferroni bound / TOHM bound (infinity marker if 0)
};

// For each resolution: calibrate an ensemble at c0, then compare
// R * marginal_survival(c) with the extrapolated bound across the ladder.
std::vector<RatioRow> ratio_curve(const SubTestModel& model,
                                  const std::vector<std::size_t>& resolutions,
                                  const std::vector<double>& thresholds,
                                  double c0, const McSettings& settings);

void write_berman_csv(const std::vector<BermanRow>& rows,
                      const std::string& path);
void write_ratio_csv(const std::vector<RatioRow>& rows, const std::string& path);
void write_covariance_csv(const ScoreCovariance& cov, const std::string& path);

}  // namespace tohm

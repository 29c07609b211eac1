#pragma once

// Seeded null-hypothesis ensembles. Replicate seeds derive from the master
// seed by counter, results land in per-replicate slots, and aggregation runs
// in index order, so worker count never changes a digit. E[N_{c0}] from a
// modest ensemble plus the a(c)/a(c0) extrapolation stands in for the large
// full simulation; oracle_pvalue IS the full simulation, for validation at
// desk scales.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tohm/grid.hpp"
#include "tohm/model.hpp"

namespace tohm {

struct McSettings {
  std::size_t n_replicates = 200;
  std::size_t n_obs = 1000;
  std::uint64_t master_seed = 1;
  int workers = 1;
  bool keep_traces = true;
  double max_failure_fraction = 0.01;
};

struct EnsembleError : std::runtime_error {
  EnsembleError(const std::string& msg, std::vector<std::uint64_t> seeds)
      : std::runtime_error(msg), failed_seeds(std::move(seeds)) {}
  std::vector<std::uint64_t> failed_seeds;
};

struct McEnsemble {
  std::size_t n_replicates = 0;
  std::size_t n_obs = 0;
  std::uint64_t master_seed = 0;
  double c0 = 0.0;
  std::vector<ProcessTrace> traces;  // filled when keep_traces
  std::vector<std::uint32_t> upcross_counts;
  std::vector<std::uint32_t> exceed_counts;
  std::vector<std::uint64_t> failed_seeds;
  double e_upcrossings = 0.0;
  double mc_std_error = 0.0;
  double e_exceedances = 0.0;
  double mc_std_error_exceedances = 0.0;
};

// Chunked parallel loop; fn(i) must only touch slot i of shared state.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

McEnsemble estimate_upcrossings(const SubTestModel& model, const ScanGrid& grid,
                                double c0, const McSettings& settings);

// Mean and standard error of counts at a threshold other than c0; requires
// kept traces.
std::pair<double, double> ensemble_mean_upcrossings(const McEnsemble& ensemble,
                                                    double c);
std::pair<double, double> ensemble_mean_exceedances(const McEnsemble& ensemble,
                                                    double c);

struct ElbowRow {
  std::size_t resolution;
  double e_upcrossings;
  double mc_err;
};

// Ê[N_{c0}] across grid resolutions (the "elbow" plot). Replicate seeds are
// shared across resolutions so the curve moves only with the grid.
std::vector<ElbowRow> upcrossing_curve(const SubTestModel& model, double c0,
                                       const std::vector<std::size_t>& resolutions,
                                       const McSettings& settings);

struct SensitivityResult {
  std::vector<ProcessTrace> paths;
  std::vector<double> ladder;
  std::vector<double> mean_upcrossings;  // one per ladder entry
  double recommended_c0;                 // ladder argmax, smallest on ties
};

SensitivityResult c0_sensitivity(const SubTestModel& model,
                                 const ScanGrid& grid, std::size_t n_paths,
                                 std::uint64_t master_seed,
                                 std::size_t n_obs = 1000, int workers = 1);

struct OracleRow {
  double c;
  double p_hat;
  double mc_err;
};

// Brute-force global p-values: fraction of null replicates whose maximum
// exceeds each threshold, with binomial error.
std::vector<OracleRow> oracle_pvalue(const SubTestModel& model,
                                     const ScanGrid& grid,
                                     const std::vector<double>& thresholds,
                                     const McSettings& settings);

// {n_replicates, n_obs, master_seed, c0, e_upcrossings, mc_std_error}
std::string ensemble_summary_json(const McEnsemble& ensemble);
McEnsemble ensemble_summary_from_json(const std::string& text);

void write_elbow_csv(const std::vector<ElbowRow>& rows, const std::string& path);
void write_oracle_csv(const std::vector<OracleRow>& rows,
                      const std::string& path);

}  // namespace tohm

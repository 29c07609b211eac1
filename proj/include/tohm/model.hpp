#pragma once

// The contract a concrete statistical model fulfills so the scan machinery
// can drive it: simulate data under given parameters, fit the null, profile
// the alternative at a fixed value of the scanned parameter, and turn the
// two log-likelihoods into a sub-test statistic. The Monte-Carlo modules only
// need null_trace(), which concrete models either derive from
// simulate + scan or (synthetic processes) generate directly.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tohm/family.hpp"
#include "tohm/grid.hpp"

namespace tohm {

using ParamMap = std::map<std::string, double>;

struct EventData {
  std::vector<double> y;
};

struct GroupedBinomRow {
  double x;
  long cases;
  long trials;
};

struct GroupedBinomData {
  std::vector<GroupedBinomRow> rows;
};

using Dataset = std::variant<EventData, GroupedBinomData>;

enum class TestDirection {
  kDetection,  // H0 pins the tested parameter at 0
  kExclusion,  // H0 pins the mixture weight at 1
  kTwoSided,   // scalar parameter, signed-root statistic
};

std::string to_string(TestDirection d);

struct NullFit {
  std::vector<double> params;
  double loglik0;
};

struct ProfileFit {
  double eta_hat = 0.0;           // tested parameter at its profile MLE
  std::vector<double> nuisance;   // remaining profiled parameters
  double loglik1 = 0.0;
  bool degenerate = false;        // fit pinned against a parameter box edge
};

struct ScanError : std::runtime_error {
  ScanError(double theta_r_, const std::string& what_)
      : std::runtime_error("scan failed at grid point " +
                           std::to_string(theta_r_) + ": " + what_),
        theta_r(theta_r_) {}
  double theta_r;
};

class SubTestModel {
 public:
  virtual ~SubTestModel() = default;

  virtual std::string name() const = 0;
  virtual ProcessFamily family() const = 0;
  virtual TestDirection direction() const = 0;

  // Range the scan grid must stay inside.
  virtual std::pair<double, double> search_range() const = 0;

  // Parameters used when simulating under H0 (parametric-bootstrap style).
  virtual std::vector<double> null_params() const = 0;

  virtual Dataset simulate(const ParamMap& params, std::size_t n,
                           std::uint64_t seed) const = 0;

  virtual NullFit fit_null(const Dataset& data) const = 0;

  // Maximize over the alternative's free parameters with the scanned
  // parameter fixed at theta_r. `warm` carries the neighbouring grid point's
  // solution, `null_fit` anchors a start that makes loglik1 >= loglik0.
  virtual ProfileFit fit_profile(const Dataset& data, double theta_r,
                                 const ProfileFit* warm,
                                 const NullFit& null_fit) const = 0;

  // Default: T = 2 (loglik1 - loglik0) clipped at zero. Signed-root models
  // override.
  virtual double subtest_stat(const NullFit& null_fit,
                              const ProfileFit& profile) const;

  // Fit the null once, then profile across the grid with warm starts.
  virtual ProcessTrace scan(const Dataset& data, const ScanGrid& grid) const;

  // One null-hypothesis replicate of the sub-test-statistic trace. Default:
  // simulate n_obs observations at null_params and scan. n_obs is ignored by
  // direct trace generators.
  virtual ProcessTrace null_trace(const ScanGrid& grid, std::size_t n_obs,
                                  std::uint64_t seed) const;

  // Simulation parameter map corresponding to H0 (used by null_trace).
  virtual ParamMap null_simulation_params() const = 0;

  // Log-likelihood as a function of (eta, null-parameter vector) with the
  // scanned parameter fixed; drives the score-sequence diagnostics. Models
  // without a likelihood (synthetic processes) return an empty function.
  using ScoreLoglik =
      std::function<double(double eta, const std::vector<double>& params)>;
  virtual ScoreLoglik score_loglik(const Dataset& data,
                                   double theta_r) const = 0;

  // Value of the tested parameter under H0 (0 for detection/two-sided,
  // 1 for exclusion).
  double eta_null() const {
    return direction() == TestDirection::kExclusion ? 1.0 : 0.0;
  }

  void check_grid(const ScanGrid& grid) const;
};

// Event dataset file format: CSV, header "y", one positive real per row.
void write_events_csv(const EventData& data, const std::string& path);
EventData read_events_csv(const std::string& path);

// Grouped binomial format: CSV, header "x,cases,trials".
void write_grouped_csv(const GroupedBinomData& data, const std::string& path);
GroupedBinomData read_grouped_csv(const std::string& path);

const EventData& expect_events(const Dataset& data, const std::string& who);
const GroupedBinomData& expect_grouped(const Dataset& data,
                                       const std::string& who);

double param_or(const ParamMap& params, const std::string& key, double fallback);
double require_param(const ParamMap& params, const std::string& key,
                     const std::string& who);

}  // namespace tohm

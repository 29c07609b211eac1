#pragma once

// Direct null-trace generators used for calibration studies and acceptance
// oracles: an i.i.d. or squared-exponential-correlated Gaussian sequence on
// the grid, optionally squared (chi-square), squared-and-clipped (chi-bar) or
// summed over independent copies (chi-square with s > 1). These models have
// no event data; simulate/fit operations are rejected.

#include <memory>
#include <mutex>

#include "tohm/model.hpp"

namespace tohm {

class SyntheticModel : public SubTestModel {
 public:
  // corr_length == 0 gives independent components; otherwise the underlying
  // Gaussian sequence has covariance exp(-(dtheta)^2 / (2 corr_length^2)).
  SyntheticModel(ProcessFamily family, double corr_length,
                 std::pair<double, double> range = {0.0, 1.0},
                 TestDirection direction = TestDirection::kDetection);

  std::string name() const override { return "synthetic"; }
  ProcessFamily family() const override { return family_; }
  TestDirection direction() const override { return direction_; }
  std::pair<double, double> search_range() const override { return range_; }
  std::vector<double> null_params() const override { return {}; }

  Dataset simulate(const ParamMap&, std::size_t, std::uint64_t) const override;
  NullFit fit_null(const Dataset&) const override;
  ProfileFit fit_profile(const Dataset&, double, const ProfileFit*,
                         const NullFit&) const override;
  ParamMap null_simulation_params() const override { return {}; }
  ScoreLoglik score_loglik(const Dataset&, double) const override;

  ProcessTrace null_trace(const ScanGrid& grid, std::size_t n_obs,
                          std::uint64_t seed) const override;

  // The underlying unit Gaussian sequence; this is what the normalized score
  // sequence is for likelihood models, so diagnostics sample it directly.
  std::vector<double> gaussian_replicate(const ScanGrid& grid,
                                         std::uint64_t seed) const;

 private:
  const std::vector<double>& cholesky_for(const ScanGrid& grid) const;

  ProcessFamily family_;
  double corr_length_;
  std::pair<double, double> range_;
  TestDirection direction_;

  struct Cache;
  std::shared_ptr<Cache> cache_;
};

}  // namespace tohm

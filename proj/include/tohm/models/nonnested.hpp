#pragma once

// Non-nested comparison of a truncated power law f(y; phi) against the
// damped dark-matter spectrum g(y; theta) = y^{-1.5} exp(-7.8 y/theta) on
// [1, 100], embedded in the comprehensive mixture
// (1 - eta) f + eta g. Detection tests H0 eta = 0 scanning theta; exclusion
// tests H0 eta = 1, where the unidentified-under-H0 parameter is the
// power-law index, so the scan grid runs over phi while the null fit
// maximizes over theta.

#include "tohm/model.hpp"

namespace tohm {

class NonNestedModel : public SubTestModel {
 public:
  // Detection: null_param is the power-law index and the grid covers
  // theta_range. Exclusion: null_param is the dark-matter theta and the grid
  // covers phi_range.
  NonNestedModel(TestDirection direction, double null_param,
                 std::pair<double, double> theta_range = {1.0, 100.0},
                 std::pair<double, double> phi_range = {0.1, 3.0});

  std::string name() const override { return "nonnested"; }
  ProcessFamily family() const override { return ProcessFamily::chi_bar_01(); }
  TestDirection direction() const override { return direction_; }
  std::pair<double, double> search_range() const override;
  std::vector<double> null_params() const override { return {null_param_}; }

  Dataset simulate(const ParamMap& params, std::size_t n,
                   std::uint64_t seed) const override;
  NullFit fit_null(const Dataset& data) const override;
  ProfileFit fit_profile(const Dataset& data, double grid_point,
                         const ProfileFit* warm,
                         const NullFit& null_fit) const override;
  ParamMap null_simulation_params() const override;
  ScoreLoglik score_loglik(const Dataset& data,
                           double grid_point) const override;

  double loglik(const EventData& data, double eta, double phi,
                double theta) const;

  static constexpr double kSupportLo = 1.0;
  static constexpr double kSupportHi = 100.0;
  static constexpr double kDampingScale = 7.8;

 private:
  TestDirection direction_;
  double null_param_;
  std::pair<double, double> theta_range_;
  std::pair<double, double> phi_range_;
};

}  // namespace tohm

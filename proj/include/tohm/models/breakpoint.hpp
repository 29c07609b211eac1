#pragma once

// Logistic break-point regression on grouped binomial data:
// logit(pi_i) = phi1 + phi2 x_i + xi (x_i - theta) 1{x_i >= theta}.
// The sub-test statistic is the signed root of the LRT for H0: xi = 0, so
// the limiting sequence is standard normal and the test is two-sided.

#include "tohm/model.hpp"

namespace tohm {

class BreakpointModel : public SubTestModel {
 public:
  // Simulation design: one binomial group per covariate value. The default
  // mirrors a maternal-age design, integer ages 17..47.
  BreakpointModel(double null_phi1 = -10.0, double null_phi2 = 0.1,
                  std::pair<double, double> theta_range = {20.0, 44.0},
                  std::vector<double> design_x = {},
                  long trials_per_group = 2000);

  std::string name() const override { return "breakpoint"; }
  ProcessFamily family() const override {
    return ProcessFamily::gaussian_two_sided();
  }
  TestDirection direction() const override { return TestDirection::kTwoSided; }
  std::pair<double, double> search_range() const override {
    return theta_range_;
  }
  std::vector<double> null_params() const override {
    return {null_phi1_, null_phi2_};
  }

  Dataset simulate(const ParamMap& params, std::size_t n,
                   std::uint64_t seed) const override;
  NullFit fit_null(const Dataset& data) const override;
  ProfileFit fit_profile(const Dataset& data, double theta_r,
                         const ProfileFit* warm,
                         const NullFit& null_fit) const override;
  double subtest_stat(const NullFit& null_fit,
                      const ProfileFit& profile) const override;
  ParamMap null_simulation_params() const override;
  ScoreLoglik score_loglik(const Dataset& data, double theta_r) const override;

  double loglik(const GroupedBinomData& data, double phi1, double phi2,
                double xi, double theta) const;

 private:
  double null_phi1_, null_phi2_;
  std::pair<double, double> theta_range_;
  std::vector<double> design_x_;
  long trials_per_group_;
};

}  // namespace tohm

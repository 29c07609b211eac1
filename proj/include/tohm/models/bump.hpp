#pragma once

// Gaussian bump on a truncated power-law background, the dark-matter line
// search. Events live on [1, 35] (GeV); the bump has relative width 0.1
// (sigma = 0.1 theta). Detection test: H0 eta = 0 vs H1 eta > 0, a boundary
// test with chi-bar(0,1) sub-test statistics.

#include "tohm/model.hpp"

namespace tohm {

class BumpModel : public SubTestModel {
 public:
  explicit BumpModel(double null_phi = 1.4,
                     std::pair<double, double> theta_range = {1.0, 35.0});

  std::string name() const override { return "bump"; }
  ProcessFamily family() const override { return ProcessFamily::chi_bar_01(); }
  TestDirection direction() const override {
    return TestDirection::kDetection;
  }
  std::pair<double, double> search_range() const override {
    return theta_range_;
  }
  std::vector<double> null_params() const override { return {null_phi_}; }

  Dataset simulate(const ParamMap& params, std::size_t n,
                   std::uint64_t seed) const override;
  NullFit fit_null(const Dataset& data) const override;
  ProfileFit fit_profile(const Dataset& data, double theta_r,
                         const ProfileFit* warm,
                         const NullFit& null_fit) const override;
  ParamMap null_simulation_params() const override;
  ScoreLoglik score_loglik(const Dataset& data, double theta_r) const override;

  // Mixture log-likelihood at explicit parameter values.
  double loglik(const EventData& data, double eta, double phi,
                double theta) const;

  static constexpr double kSupportLo = 1.0;
  static constexpr double kSupportHi = 35.0;
  static constexpr double kRelativeWidth = 0.1;

 private:
  double null_phi_;
  std::pair<double, double> theta_range_;
};

}  // namespace tohm

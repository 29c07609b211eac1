#pragma once

// Null-process families and the global p-value machinery. A family supplies
// the extrapolation factor a(c) and the marginal survival function of the
// limiting process; the bound combines an endpoint term with Monte-Carlo
// upcrossings of a low threshold c0, scaled up by a(c_R)/a(c0). The b(theta)
// factor of the upcrossing-intensity decomposition is never materialized:
// the ratio cancels it.

#include <optional>
#include <string>

#include "tohm/grid.hpp"

namespace tohm {

enum class FamilyKind {
  kChiSquare,         // chi^2_s limiting process (s >= 1)
  kChiBar01,          // 50:50 mixture of a point mass at zero and chi^2_1
  kGaussianOneSided,  // standard normal process, one-sided test
  kGaussianTwoSided,  // standard normal process, two-sided test
};

class ProcessFamily {
 public:
  static ProcessFamily chi_square(unsigned s);
  static ProcessFamily chi_bar_01();
  static ProcessFamily gaussian_one_sided();
  static ProcessFamily gaussian_two_sided();

  FamilyKind kind() const { return kind_; }
  unsigned dof() const { return s_; }  // s, meaningful for kChiSquare
  const std::string& name() const { return name_; }
  bool two_sided() const { return kind_ == FamilyKind::kGaussianTwoSided; }

 private:
  ProcessFamily(FamilyKind kind, unsigned s, std::string name)
      : kind_(kind), s_(s), name_(std::move(name)) {}
  FamilyKind kind_;
  unsigned s_;
  std::string name_;
};

// a(c): chi^2_s -> c^{(s-1)/2} e^{-c/2}; chi-bar -> e^{-c/2};
// Gaussian (either sidedness) -> e^{-c^2/2}. Requires c >= 0.
double a_of_c(const ProcessFamily& family, double c);
double log_a_of_c(const ProcessFamily& family, double c);

// Marginal survival of one component of the null process. For the two-sided
// Gaussian family this is the one-sided tail; doubling happens at bound
// level.
double marginal_survival(const ProcessFamily& family, double c);

// Local p-value of one observed sub-test statistic (two-sided families use
// 2*Phi(-|w|)).
double local_pvalue(const ProcessFamily& family, double w);

// argmax of a(c): s-1 for chi^2_s with s > 1; undefined otherwise (pick c0 by
// trace inspection instead).
std::optional<double> suggest_c0(const ProcessFamily& family);

struct BoundParts {
  double endpoint_term;          // P(W(L) > c_R), doubled when two-sided
  double extrapolation_factor;   // a(c_R)/a(c0), doubled when two-sided
  double tohm_pvalue;            // endpoint + factor * E[N_{c0}]
  double tohm_pvalue_mc_error;   // factor * mc_error_c0
};

// The computable global p-value bound. Requires 0 <= c0 <= c_R and a(c0) > 0.
BoundParts tohm_bound(const ProcessFamily& family, double c_r, double c0,
                      double expected_upcrossings_c0, double mc_error_c0);

// R times the smallest local p-value (identical marginals make this
// R * marginal_survival(c_R) for one-sided families). May exceed 1.
double bonferroni_pvalue(const ProcessFamily& family,
                         const ProcessTrace& trace);

struct BoundReport {
  double c_R;
  double theta_hat;
  double c0;
  double expected_upcrossings_c0;
  double mc_error_c0;
  double endpoint_term;
  double extrapolation_factor;
  double tohm_pvalue;
  double tohm_pvalue_mc_error;
  double bonferroni_pvalue;
  double sigma_tohm;
  double sigma_bonferroni;
  // Probabilities are reported unclipped; these mark values above one.
  bool tohm_pvalue_exceeds_one;
  bool bonferroni_pvalue_exceeds_one;
  std::string config_hash;  // set by the pipeline when a config is in play
};

BoundReport make_bound_report(const ProcessFamily& family,
                              const ProcessTrace& trace, double c0,
                              double expected_upcrossings_c0,
                              double mc_error_c0);

// Flat JSON object with exactly the BoundReport field names.
std::string bound_report_json(const BoundReport& report);
BoundReport bound_report_from_json(const std::string& text);

// Human-readable block: sigma to two decimals, p-values to three significant
// digits.
std::string bound_report_text(const BoundReport& report);

}  // namespace tohm

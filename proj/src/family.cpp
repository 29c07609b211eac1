#include "tohm/family.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "tohm/special.hpp"

namespace tohm {

ProcessFamily ProcessFamily::chi_square(unsigned s) {
  if (s < 1) throw std::invalid_argument("ProcessFamily: chi-square needs s >= 1");
  return ProcessFamily(FamilyKind::kChiSquare, s,
                       "chi-square(" + std::to_string(s) + ")");
}

ProcessFamily ProcessFamily::chi_bar_01() {
  return ProcessFamily(FamilyKind::kChiBar01, 1, "chi-bar(0,1)");
}

ProcessFamily ProcessFamily::gaussian_one_sided() {
  return ProcessFamily(FamilyKind::kGaussianOneSided, 1, "gaussian one-sided");
}

ProcessFamily ProcessFamily::gaussian_two_sided() {
  return ProcessFamily(FamilyKind::kGaussianTwoSided, 1, "gaussian two-sided");
}

double log_a_of_c(const ProcessFamily& family, double c) {
  if (!std::isfinite(c) || c < 0.0) {
    throw std::invalid_argument("a(c): c must be finite and >= 0");
  }
  switch (family.kind()) {
    case FamilyKind::kChiSquare: {
      const unsigned s = family.dof();
      if (s == 1) return -0.5 * c;
      if (c == 0.0) return -std::numeric_limits<double>::infinity();
      return 0.5 * (s - 1) * std::log(c) - 0.5 * c;
    }
    case FamilyKind::kChiBar01:
      return -0.5 * c;
    case FamilyKind::kGaussianOneSided:
    case FamilyKind::kGaussianTwoSided:
      return -0.5 * c * c;
  }
  throw std::logic_error("a(c): unreachable");
}

double a_of_c(const ProcessFamily& family, double c) {
  return std::exp(log_a_of_c(family, c));
}

double marginal_survival(const ProcessFamily& family, double c) {
  if (!std::isfinite(c)) {
    throw std::invalid_argument("marginal_survival: c must be finite");
  }
  switch (family.kind()) {
    case FamilyKind::kChiSquare:
      return c <= 0.0 ? 1.0 : chi2_survival(family.dof(), c);
    case FamilyKind::kChiBar01:
      if (c < 0.0) return 1.0;
      if (c == 0.0) return 0.5;
      return 0.5 * chi2_survival(1, c);
    case FamilyKind::kGaussianOneSided:
    case FamilyKind::kGaussianTwoSided:
      return normal_sf(c);
  }
  throw std::logic_error("marginal_survival: unreachable");
}

double local_pvalue(const ProcessFamily& family, double w) {
  if (family.two_sided()) return 2.0 * normal_sf(std::fabs(w));
  return marginal_survival(family, w);
}

std::optional<double> suggest_c0(const ProcessFamily& family) {
  if (family.kind() == FamilyKind::kChiSquare && family.dof() > 1) {
    return static_cast<double>(family.dof() - 1);
  }
  return std::nullopt;
}

BoundParts tohm_bound(const ProcessFamily& family, double c_r, double c0,
                      double expected_upcrossings_c0, double mc_error_c0) {
  if (!std::isfinite(c_r) || !std::isfinite(c0)) {
    throw std::invalid_argument("tohm_bound: thresholds must be finite");
  }
  if (c0 < 0.0 || c0 > c_r) {
    throw std::invalid_argument("tohm_bound: requires 0 <= c0 <= c_R");
  }
  if (expected_upcrossings_c0 < 0.0 || mc_error_c0 < 0.0) {
    throw std::invalid_argument("tohm_bound: negative upcrossing estimate");
  }
  const double log_ratio = log_a_of_c(family, c_r) - log_a_of_c(family, c0);
  if (!std::isfinite(log_ratio)) {
    throw std::invalid_argument(
        "tohm_bound: a(c0) = 0, pick a strictly positive c0 for this family");
  }
  const double sides = family.two_sided() ? 2.0 : 1.0;
  BoundParts parts;
  parts.endpoint_term = sides * marginal_survival(family, c_r);
  parts.extrapolation_factor = sides * std::exp(log_ratio);
  parts.tohm_pvalue =
      parts.endpoint_term + parts.extrapolation_factor * expected_upcrossings_c0;
  parts.tohm_pvalue_mc_error = parts.extrapolation_factor * mc_error_c0;
  return parts;
}

double bonferroni_pvalue(const ProcessFamily& family,
                         const ProcessTrace& trace) {
  double min_p = std::numeric_limits<double>::infinity();
  for (double w : trace.values) {
    min_p = std::min(min_p, local_pvalue(family, w));
  }
  return static_cast<double>(trace.values.size()) * min_p;
}

BoundReport make_bound_report(const ProcessFamily& family,
                              const ProcessTrace& trace, double c0,
                              double expected_upcrossings_c0,
                              double mc_error_c0) {
  const GlobalMax gm = global_max(trace);
  const BoundParts parts =
      tohm_bound(family, gm.c_r, c0, expected_upcrossings_c0, mc_error_c0);
  BoundReport rep;
  rep.c_R = gm.c_r;
  rep.theta_hat = gm.theta_hat;
  rep.c0 = c0;
  rep.expected_upcrossings_c0 = expected_upcrossings_c0;
  rep.mc_error_c0 = mc_error_c0;
  rep.endpoint_term = parts.endpoint_term;
  rep.extrapolation_factor = parts.extrapolation_factor;
  rep.tohm_pvalue = parts.tohm_pvalue;
  rep.tohm_pvalue_mc_error = parts.tohm_pvalue_mc_error;
  rep.bonferroni_pvalue = bonferroni_pvalue(family, trace);
  rep.sigma_tohm = rep.tohm_pvalue >= 1.0 ? 0.0 : p_to_sigma(rep.tohm_pvalue);
  rep.sigma_bonferroni =
      rep.bonferroni_pvalue >= 1.0 ? 0.0 : p_to_sigma(rep.bonferroni_pvalue);
  rep.tohm_pvalue_exceeds_one = rep.tohm_pvalue > 1.0;
  rep.bonferroni_pvalue_exceeds_one = rep.bonferroni_pvalue > 1.0;
  return rep;
}

std::string bound_report_json(const BoundReport& r) {
  nlohmann::json j;
  j["c_R"] = r.c_R;
  j["theta_hat"] = r.theta_hat;
  j["c0"] = r.c0;
  j["expected_upcrossings_c0"] = r.expected_upcrossings_c0;
  j["mc_error_c0"] = r.mc_error_c0;
  j["endpoint_term"] = r.endpoint_term;
  j["extrapolation_factor"] = r.extrapolation_factor;
  j["tohm_pvalue"] = r.tohm_pvalue;
  j["tohm_pvalue_mc_error"] = r.tohm_pvalue_mc_error;
  j["bonferroni_pvalue"] = r.bonferroni_pvalue;
  j["sigma_tohm"] = r.sigma_tohm;
  j["sigma_bonferroni"] = r.sigma_bonferroni;
  j["tohm_pvalue_exceeds_one"] = r.tohm_pvalue_exceeds_one;
  j["bonferroni_pvalue_exceeds_one"] = r.bonferroni_pvalue_exceeds_one;
  if (!r.config_hash.empty()) j["config_hash"] = r.config_hash;
  return j.dump(2) + "\n";
}

BoundReport bound_report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("bound report JSON: ") + e.what());
  }
  BoundReport r;
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) {
      throw std::invalid_argument(std::string("bound report JSON: missing '") +
                                  key + "'");
    }
    return j.at(key);
  };
  r.c_R = need("c_R").get<double>();
  r.theta_hat = need("theta_hat").get<double>();
  r.c0 = need("c0").get<double>();
  r.expected_upcrossings_c0 = need("expected_upcrossings_c0").get<double>();
  r.mc_error_c0 = need("mc_error_c0").get<double>();
  r.endpoint_term = need("endpoint_term").get<double>();
  r.extrapolation_factor = need("extrapolation_factor").get<double>();
  r.tohm_pvalue = need("tohm_pvalue").get<double>();
  r.tohm_pvalue_mc_error = need("tohm_pvalue_mc_error").get<double>();
  r.bonferroni_pvalue = need("bonferroni_pvalue").get<double>();
  r.sigma_tohm = need("sigma_tohm").get<double>();
  r.sigma_bonferroni = need("sigma_bonferroni").get<double>();
  r.tohm_pvalue_exceeds_one = need("tohm_pvalue_exceeds_one").get<bool>();
  r.bonferroni_pvalue_exceeds_one =
      need("bonferroni_pvalue_exceeds_one").get<bool>();
  r.config_hash = j.value("config_hash", std::string());
  return r;
}

namespace {

std::string format_p(double p, bool exceeds_one) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2e", p);
  std::string s(buf);
  if (exceeds_one) s += " (> 1)";
  return s;
}

}  // namespace

std::string bound_report_text(const BoundReport& r) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "c_R = %.6g at theta_hat = %.6g\n", r.c_R,
                r.theta_hat);
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "E[N_c0] = %.6g +/- %.2e at c0 = %.6g, a(c_R)/a(c0) scale %.4e\n",
                r.expected_upcrossings_c0, r.mc_error_c0, r.c0,
                r.extrapolation_factor);
  out += buf;
  std::snprintf(buf, sizeof(buf), "TOHM p-value:       %s (%.2f sigma)\n",
                format_p(r.tohm_pvalue, r.tohm_pvalue_exceeds_one).c_str(),
                r.sigma_tohm);
  out += buf;
  std::snprintf(
      buf, sizeof(buf), "Bonferroni p-value: %s (%.2f sigma)\n",
      format_p(r.bonferroni_pvalue, r.bonferroni_pvalue_exceeds_one).c_str(),
      r.sigma_bonferroni);
  out += buf;
  return out;
}

}  // namespace tohm

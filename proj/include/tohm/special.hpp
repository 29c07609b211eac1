#pragma once

// Special functions used across the library: chi-square survival via the
// regularized upper incomplete gamma, the standard normal CDF/quantile, and
// significance conversion. Tails are computed in log-friendly forms so that
// p-values down to ~1e-300 (significances past 12 sigma) survive.

#include <cstddef>

namespace tohm {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
// Series expansion below x < a + 1, Lentz continued fraction above.
double gamma_q(double a, double x);

// P(chi^2_s > c). Requires s >= 1 and c >= 0.
double chi2_survival(unsigned s, double c);

// Standard normal CDF Phi(z) and survival Phi(-z).
double normal_cdf(double z);
double normal_sf(double z);

// Inverse CDF on p in (0, 1), monotone bisection on normal_cdf. Accurate to
// the resolution the double-precision CDF supports (tails included).
double normal_quantile(double p);

// Significance in sigma: Phi^{-1}(1 - p). p >= 1 maps to 0, p <= 0 is an
// error.
double p_to_sigma(double p);

}  // namespace tohm

#pragma once

// Adaptive Simpson integration. Used by normalization checks and anywhere a
// density lacks a closed-form integral.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace tohm {

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a,
                      double fa, double b, double fb, double& fm) {
  const double m = 0.5 * (a + b);
  fm = f(m);
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a,
                    double fa, double b, double fb, double whole, double fm,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  double flm, frm;
  const double left = simpson(f, a, fa, m, fm, flm);
  const double right = simpson(f, m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adapt(f, a, fa, m, fm, left, flm, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, right, frm, 0.5 * tol, depth - 1);
}

}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10, int max_depth = 50) {
  if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");
  const double fa = f(a);
  const double fb = f(b);
  double fm;
  const double whole = detail::simpson(f, a, fa, b, fb, fm);
  return detail::adapt(f, a, fa, b, fb, whole, fm, tol, max_depth);
}

// Integrate piecewise between knots; sharp features (narrow bumps) get their
// own panels instead of defeating the top-level error estimate.
inline double integrate_with_knots(const std::function<double(double)>& f,
                                   double a, double b,
                                   std::vector<double> knots,
                                   double tol = 1e-10) {
  knots.push_back(a);
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = std::max(a, knots[i]);
    const double hi = std::min(b, knots[i + 1]);
    if (hi > lo) total += integrate(f, lo, hi, tol);
  }
  return total;
}

}  // namespace tohm

#include "tohm/models/densities.hpp"

#include <cmath>
#include <stdexcept>

#include "tohm/special.hpp"

namespace tohm::dens {

namespace {

void check_support(double lo, double hi, const char* who) {
  if (!(lo > 0.0) || !(lo < hi)) {
    throw std::invalid_argument(std::string(who) +
                                ": requires 0 < lo < hi support");
  }
}

}  // namespace

double pareto_norm(double phi, double lo, double hi) {
  check_support(lo, hi, "pareto_norm");
  if (!(phi > 0.0)) throw std::invalid_argument("pareto_norm: phi must be > 0");
  return (std::pow(lo, -phi) - std::pow(hi, -phi)) / phi;
}

double pareto_cdf(double y, double phi, double lo, double hi) {
  if (y <= lo) return 0.0;
  if (y >= hi) return 1.0;
  const double lp = std::pow(lo, -phi);
  return (lp - std::pow(y, -phi)) / (lp - std::pow(hi, -phi));
}

double pareto_inverse_cdf(double u, double phi, double lo, double hi) {
  const double lp = std::pow(lo, -phi);
  const double hp = std::pow(hi, -phi);
  return std::pow(lp - u * (lp - hp), -1.0 / phi);
}

double gauss_bump_norm(double theta, double sigma, double lo, double hi) {
  check_support(lo, hi, "gauss_bump_norm");
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("gauss_bump_norm: sigma must be > 0");
  }
  const double root_2pi = 2.5066282746310002;
  return sigma * root_2pi *
         (normal_cdf((hi - theta) / sigma) - normal_cdf((lo - theta) / sigma));
}

double gauss_bump_inverse_cdf(double u, double theta, double sigma, double lo,
                              double hi) {
  const double pa = normal_cdf((lo - theta) / sigma);
  const double pb = normal_cdf((hi - theta) / sigma);
  const double p = pa + u * (pb - pa);
  return theta + sigma * normal_quantile(std::min(std::max(p, 1e-300), 1.0 - 1e-16));
}

double damped_norm(double beta, double lo, double hi) {
  check_support(lo, hi, "damped_norm");
  if (!(beta > 0.0)) throw std::invalid_argument("damped_norm: beta must be > 0");
  // integral y^{-3/2} e^{-beta y} dy
  //   = 2 lo^{-1/2} e^{-beta lo} - 2 hi^{-1/2} e^{-beta hi}
  //     - 2 sqrt(pi beta) (erf(sqrt(beta hi)) - erf(sqrt(beta lo)))
  const double root_pi_beta = std::sqrt(M_PI * beta);
  return 2.0 / std::sqrt(lo) * std::exp(-beta * lo) -
         2.0 / std::sqrt(hi) * std::exp(-beta * hi) -
         2.0 * root_pi_beta *
             (std::erf(std::sqrt(beta * hi)) - std::erf(std::sqrt(beta * lo)));
}

double damped_cdf(double y, double beta, double lo, double hi) {
  if (y <= lo) return 0.0;
  if (y >= hi) return 1.0;
  return damped_norm(beta, lo, y) / damped_norm(beta, lo, hi);
}

double damped_inverse_cdf(double u, double beta, double lo, double hi) {
  double a = lo, b = hi;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    if (damped_cdf(m, beta, lo, hi) < u) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace tohm::dens

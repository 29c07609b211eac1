#pragma once

// Component densities shared by the event-data models: the truncated
// power law (Pareto type I), the truncated Gaussian bump, and the
// exponentially damped dark-matter spectrum y^{-1.5} exp(-7.8 y / theta).
// Normalizers use closed forms (the damped spectrum integrates via erf after
// integration by parts).

#include <cstddef>

namespace tohm::dens {

// integral over [lo, hi] of y^{-(phi+1)}
double pareto_norm(double phi, double lo, double hi);
double pareto_cdf(double y, double phi, double lo, double hi);
double pareto_inverse_cdf(double u, double phi, double lo, double hi);

// integral over [lo, hi] of exp(-(y-theta)^2 / (2 sigma^2))
double gauss_bump_norm(double theta, double sigma, double lo, double hi);
double gauss_bump_inverse_cdf(double u, double theta, double sigma, double lo,
                              double hi);

// integral over [lo, hi] of y^{-3/2} exp(-beta y)
double damped_norm(double beta, double lo, double hi);
double damped_cdf(double y, double beta, double lo, double hi);
double damped_inverse_cdf(double u, double beta, double lo, double hi);

}  // namespace tohm::dens

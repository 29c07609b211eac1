#pragma once

// Bounded derivative-free maximizers. Profile likelihoods in this project
// carry kinks at parameter-space boundaries (mixture weights pinned at 0 or
// 1), so everything here avoids gradients: a panelled golden-section/Brent
// search in one dimension and a box-projected Nelder-Mead simplex otherwise.

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tohm {

struct OptimizerSettings {
  double abs_tol = 1e-8;  // on parameters
  int max_iters = 500;
  int restarts = 3;  // perturbed restarts around the incumbent
};

struct FitError : std::runtime_error {
  FitError(std::string msg, std::vector<double> best_x_, double best_f_)
      : std::runtime_error(std::move(msg)),
        best_x(std::move(best_x_)),
        best_f(best_f_) {}
  std::vector<double> best_x;  // best iterate at failure
  double best_f;
};

struct MaxResult {
  std::vector<double> argmax;
  double max = 0.0;
  int evaluations = 0;
};

using ObjectiveFn = std::function<double(const std::vector<double>&)>;
using ScalarFn = std::function<double(double)>;

// Maximize f over [lo, hi]. A coarse panel scan locates candidate brackets,
// each refined by Brent's method (golden section with parabolic steps).
MaxResult maximize_scalar(const ScalarFn& f, double lo, double hi,
                          const OptimizerSettings& settings = {});

// Maximize f over an axis-aligned box. One-dimensional boxes dispatch to
// maximize_scalar; higher dimensions run Nelder-Mead on -f with candidate
// vertices clamped into the box. `starts` seeds extra simplex starts (the
// box centre is always tried); deterministic perturbations cover
// settings.restarts more.
MaxResult maximize_bounded(const ObjectiveFn& f,
                           const std::vector<std::pair<double, double>>& box,
                           const OptimizerSettings& settings = {},
                           const std::vector<std::vector<double>>& starts = {});

}  // namespace tohm

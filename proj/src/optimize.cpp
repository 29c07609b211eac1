#include "tohm/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace tohm {

namespace {

void check_box(const std::vector<std::pair<double, double>>& box) {
  if (box.empty()) throw std::invalid_argument("maximize: empty box");
  for (const auto& [lo, hi] : box) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw std::invalid_argument("maximize: degenerate box interval");
    }
  }
}

// Brent's localmin on [a, b] applied to -f; returns the maximizer of f.
double brent_max(const ScalarFn& f, double a, double b, double tol,
                 int max_iters, double& fmax, int& evals) {
  const double gold = 0.3819660112501051;
  double x = a + gold * (b - a);
  double w = x, v = x;
  double fx = -f(x);
  ++evals;
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;

  for (int iter = 0; iter < max_iters; ++iter) {
    const double xm = 0.5 * (a + b);
    const double tol1 = tol + 1e-12 * std::fabs(x);
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) break;

    bool parabolic = false;
    if (std::fabs(e) > tol1) {
      // Trial parabolic fit through (v, w, x).
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double etmp = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * etmp) && p > q * (a - x) &&
          p < q * (b - x)) {
        parabolic = true;
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (xm >= x) ? tol1 : -tol1;
      }
    }
    if (!parabolic) {
      e = (x >= xm) ? a - x : b - x;
      d = gold * e;
    }
    const double u =
        (std::fabs(d) >= tol1) ? x + d : x + ((d >= 0.0) ? tol1 : -tol1);
    const double fu = -f(u);
    ++evals;
    if (fu <= fx) {
      if (u >= x) {
        a = x;
      } else {
        b = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  fmax = -fx;
  return x;
}

// Small deterministic generator for perturbed restarts.
struct Lcg {
  std::uint64_t state;
  double next01() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  }
};

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> f;
};

double clampd(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

}  // namespace

MaxResult maximize_scalar(const ScalarFn& f, double lo, double hi,
                          const OptimizerSettings& settings) {
  check_box({{lo, hi}});
  int evals = 0;
  // Coarse scan so multimodal profiles do not trap the refinement.
  const int coarse = 33;
  std::vector<double> xs(coarse), fs(coarse);
  for (int i = 0; i < coarse; ++i) {
    xs[i] = lo + (hi - lo) * i / (coarse - 1);
    fs[i] = f(xs[i]);
    ++evals;
  }
  std::vector<int> candidates;
  for (int i = 0; i < coarse; ++i) {
    const bool left_ok = (i == 0) || fs[i] >= fs[i - 1];
    const bool right_ok = (i == coarse - 1) || fs[i] >= fs[i + 1];
    if (left_ok && right_ok) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](int a, int b) { return fs[a] > fs[b]; });
  const std::size_t n_refine =
      std::min<std::size_t>(candidates.size(), 1 + settings.restarts);

  double best_x = xs[candidates.front()];
  double best_f = fs[candidates.front()];
  for (std::size_t k = 0; k < n_refine; ++k) {
    const int i = candidates[k];
    const double a = xs[std::max(i - 1, 0)];
    const double b = xs[std::min(i + 1, coarse - 1)];
    double fmax = 0.0;
    const double xm =
        brent_max(f, a, b, settings.abs_tol, settings.max_iters, fmax, evals);
    if (fmax > best_f) {
      best_f = fmax;
      best_x = xm;
    }
  }
  return {{best_x}, best_f, evals};
}

MaxResult maximize_bounded(const ObjectiveFn& f,
                           const std::vector<std::pair<double, double>>& box,
                           const OptimizerSettings& settings,
                           const std::vector<std::vector<double>>& starts) {
  check_box(box);
  const std::size_t dim = box.size();
  if (dim == 1) {
    auto g = [&](double x) { return f({x}); };
    return maximize_scalar(g, box[0].first, box[0].second, settings);
  }

  int evals = 0;
  auto neg = [&](const std::vector<double>& x) {
    ++evals;
    return -f(x);
  };

  std::vector<double> width(dim);
  for (std::size_t d = 0; d < dim; ++d) width[d] = box[d].second - box[d].first;

  auto clamp_point = [&](std::vector<double> p) {
    for (std::size_t d = 0; d < dim; ++d) {
      p[d] = clampd(p[d], box[d].first, box[d].second);
    }
    return p;
  };

  auto run_simplex = [&](std::vector<double> x0, double step_frac,
                         std::vector<double>& out_x, double& out_f) {
    x0 = clamp_point(std::move(x0));
    Simplex s;
    s.x.push_back(x0);
    for (std::size_t d = 0; d < dim; ++d) {
      std::vector<double> v = x0;
      double step = step_frac * width[d];
      if (v[d] + step > box[d].second) step = -step;
      v[d] += step;
      s.x.push_back(clamp_point(std::move(v)));
    }
    s.f.resize(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) s.f[i] = neg(s.x[i]);

    auto order = [&] {
      std::vector<std::size_t> idx(dim + 1);
      for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(),
                [&](std::size_t a, std::size_t b) { return s.f[a] < s.f[b]; });
      Simplex t;
      for (std::size_t i : idx) {
        t.x.push_back(s.x[i]);
        t.f.push_back(s.f[i]);
      }
      s = std::move(t);
    };

    bool converged = false;
    for (int iter = 0; iter < settings.max_iters; ++iter) {
      order();
      double diam = 0.0;
      for (std::size_t i = 1; i <= dim; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
          diam = std::max(diam, std::fabs(s.x[i][d] - s.x[0][d]));
        }
      }
      if (diam < settings.abs_tol) {
        converged = true;
        break;
      }

      std::vector<double> centroid(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t d = 0; d < dim; ++d) centroid[d] += s.x[i][d];
      }
      for (std::size_t d = 0; d < dim; ++d) centroid[d] /= dim;

      auto blend = [&](double coef) {
        std::vector<double> p(dim);
        for (std::size_t d = 0; d < dim; ++d) {
          p[d] = centroid[d] + coef * (centroid[d] - s.x[dim][d]);
        }
        return clamp_point(std::move(p));
      };

      const auto xr = blend(1.0);
      const double fr = neg(xr);
      if (fr < s.f[0]) {
        const auto xe = blend(2.0);
        const double fe = neg(xe);
        if (fe < fr) {
          s.x[dim] = xe;
          s.f[dim] = fe;
        } else {
          s.x[dim] = xr;
          s.f[dim] = fr;
        }
      } else if (fr < s.f[dim - 1]) {
        s.x[dim] = xr;
        s.f[dim] = fr;
      } else {
        const auto xc = blend(fr < s.f[dim] ? 0.5 : -0.5);
        const double fc = neg(xc);
        if (fc < std::min(fr, s.f[dim])) {
          s.x[dim] = xc;
          s.f[dim] = fc;
        } else {
          // Shrink toward the best vertex.
          for (std::size_t i = 1; i <= dim; ++i) {
            for (std::size_t d = 0; d < dim; ++d) {
              s.x[i][d] = s.x[0][d] + 0.5 * (s.x[i][d] - s.x[0][d]);
            }
            s.f[i] = neg(s.x[i]);
          }
        }
      }
    }
    order();
    out_x = s.x[0];
    out_f = -s.f[0];
    return converged;
  };

  // Assemble the start list: user starts, box centre, perturbations.
  std::vector<std::vector<double>> all_starts = starts;
  {
    std::vector<double> centre(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      centre[d] = 0.5 * (box[d].first + box[d].second);
    }
    all_starts.push_back(std::move(centre));
  }
  Lcg lcg{0x6a09e667f3bcc909ULL};
  for (int r = 0; r < settings.restarts; ++r) {
    std::vector<double> p(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      p[d] = box[d].first + lcg.next01() * width[d];
    }
    all_starts.push_back(std::move(p));
  }

  bool any_converged = false;
  std::vector<double> best_x;
  double best_f = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < all_starts.size(); ++k) {
    std::vector<double> x;
    double fx;
    const bool ok = run_simplex(all_starts[k], 0.10, x, fx);
    any_converged |= ok;
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
    // After the first start succeeds, one tightening pass around the
    // incumbent is usually all the remaining budget buys.
    if (ok && k + 1 >= all_starts.size()) break;
  }
  if (!best_x.empty()) {
    std::vector<double> x;
    double fx;
    const bool ok = run_simplex(best_x, 0.01, x, fx);
    any_converged |= ok;
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }

  if (!any_converged) {
    throw FitError("maximize_bounded: simplex did not reach tolerance", best_x,
                   best_f);
  }
  return {best_x, best_f, evals};
}

}  // namespace tohm

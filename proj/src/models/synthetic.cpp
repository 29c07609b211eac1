#include "tohm/models/synthetic.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include "tohm/rng.hpp"

namespace tohm {

namespace {

// Lower Cholesky factor with escalating diagonal jitter; the squared
// exponential kernel is numerically rank-deficient on fine grids.
std::vector<double> cholesky_with_jitter(const std::vector<double>& cov,
                                         std::size_t n) {
  for (double jitter : {0.0, 1e-12, 1e-10, 1e-8, 1e-6}) {
    std::vector<double> l(cov);
    for (std::size_t i = 0; i < n; ++i) l[i * n + i] += jitter;
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      double d = l[j * n + j];
      for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
      if (d <= 0.0) {
        ok = false;
        break;
      }
      d = std::sqrt(d);
      l[j * n + j] = d;
      for (std::size_t i = j + 1; i < n; ++i) {
        double v = l[i * n + j];
        for (std::size_t k = 0; k < j; ++k) v -= l[i * n + k] * l[j * n + k];
        l[i * n + j] = v / d;
      }
    }
    if (ok) {
      // zero the upper triangle
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) l[i * n + j] = 0.0;
      }
      return l;
    }
  }
  throw std::runtime_error("synthetic: covariance not positive definite");
}

}  // namespace

struct SyntheticModel::Cache {
  std::mutex mu;
  std::map<std::tuple<std::size_t, double, double>, std::vector<double>> factors;
};

SyntheticModel::SyntheticModel(ProcessFamily family, double corr_length,
                               std::pair<double, double> range,
                               TestDirection direction)
    : family_(family),
      corr_length_(corr_length),
      range_(range),
      direction_(direction),
      cache_(std::make_shared<Cache>()) {
  if (corr_length_ < 0.0) {
    throw std::invalid_argument("synthetic: corr_length must be >= 0");
  }
  if (!(range_.first < range_.second)) {
    throw std::invalid_argument("synthetic: bad range");
  }
}

Dataset SyntheticModel::simulate(const ParamMap&, std::size_t,
                                 std::uint64_t) const {
  throw std::invalid_argument(
      "synthetic: trace generator has no event data to simulate");
}

NullFit SyntheticModel::fit_null(const Dataset&) const {
  throw std::invalid_argument("synthetic: nothing to fit");
}

ProfileFit SyntheticModel::fit_profile(const Dataset&, double,
                                       const ProfileFit*,
                                       const NullFit&) const {
  throw std::invalid_argument("synthetic: nothing to fit");
}

SubTestModel::ScoreLoglik SyntheticModel::score_loglik(const Dataset&,
                                                       double) const {
  return {};
}

const std::vector<double>& SyntheticModel::cholesky_for(
    const ScanGrid& grid) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  const auto key =
      std::make_tuple(grid.resolution(), grid.lower(), grid.upper());
  auto it = cache_->factors.find(key);
  if (it != cache_->factors.end()) return it->second;

  const std::size_t n = grid.resolution();
  std::vector<double> cov(n * n);
  const double inv2l2 = 1.0 / (2.0 * corr_length_ * corr_length_);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = grid[i] - grid[j];
      cov[i * n + j] = std::exp(-d * d * inv2l2);
    }
  }
  auto [ins, _] = cache_->factors.emplace(key, cholesky_with_jitter(cov, n));
  return ins->second;
}

std::vector<double> SyntheticModel::gaussian_replicate(
    const ScanGrid& grid, std::uint64_t seed) const {
  const std::size_t n = grid.resolution();
  Rng rng(seed);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = rng.normal01();
  if (corr_length_ == 0.0) return z;

  const std::vector<double>& l = cholesky_for(grid);
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += l[i * n + j] * z[j];
    w[i] = acc;
  }
  return w;
}

ProcessTrace SyntheticModel::null_trace(const ScanGrid& grid,
                                        std::size_t /*n_obs*/,
                                        std::uint64_t seed) const {
  check_grid(grid);
  const std::size_t n = grid.resolution();
  std::vector<double> values(n, 0.0);
  switch (family_.kind()) {
    case FamilyKind::kGaussianOneSided:
    case FamilyKind::kGaussianTwoSided:
      values = gaussian_replicate(grid, seed);
      break;
    case FamilyKind::kChiSquare: {
      for (unsigned d = 0; d < family_.dof(); ++d) {
        const auto z = gaussian_replicate(grid, replicate_seed(seed, d));
        for (std::size_t i = 0; i < n; ++i) values[i] += z[i] * z[i];
      }
      break;
    }
    case FamilyKind::kChiBar01: {
      const auto z = gaussian_replicate(grid, seed);
      for (std::size_t i = 0; i < n; ++i) {
        values[i] = z[i] >= 0.0 ? z[i] * z[i] : 0.0;
      }
      break;
    }
  }
  return ProcessTrace(grid, std::move(values));
}

}  // namespace tohm

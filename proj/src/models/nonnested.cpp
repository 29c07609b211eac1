#include "tohm/models/nonnested.hpp"

#include <cmath>

#include "tohm/models/densities.hpp"
#include "tohm/optimize.hpp"
#include "tohm/rng.hpp"

namespace tohm {

namespace {

constexpr double kPhiFitLo = 0.05;
constexpr double kPhiFitHi = 8.0;

struct Workspace {
  std::vector<double> y, log_y;
  double sum_log_y = 0.0, sum_y = 0.0;

  explicit Workspace(const EventData& data) {
    y = data.y;
    log_y.reserve(y.size());
    for (double v : y) {
      if (!(v >= NonNestedModel::kSupportLo) ||
          !(v <= NonNestedModel::kSupportHi)) {
        throw std::invalid_argument("nonnested: observation outside [1, 100]");
      }
      log_y.push_back(std::log(v));
      sum_log_y += log_y.back();
      sum_y += v;
    }
  }

  double n() const { return static_cast<double>(y.size()); }

  double powerlaw_loglik(double phi) const {
    const double k = dens::pareto_norm(phi, NonNestedModel::kSupportLo,
                                       NonNestedModel::kSupportHi);
    return -(phi + 1.0) * sum_log_y - n() * std::log(k);
  }

  double darkmatter_loglik(double theta) const {
    const double beta = NonNestedModel::kDampingScale / theta;
    const double k = dens::damped_norm(beta, NonNestedModel::kSupportLo,
                                       NonNestedModel::kSupportHi);
    return -1.5 * sum_log_y - beta * sum_y - n() * std::log(k);
  }

  std::vector<double> powerlaw_density(double phi) const {
    const double k = dens::pareto_norm(phi, NonNestedModel::kSupportLo,
                                       NonNestedModel::kSupportHi);
    const double log_k = std::log(k);
    std::vector<double> f;
    f.reserve(y.size());
    for (double ly : log_y) f.push_back(std::exp(-(phi + 1.0) * ly - log_k));
    return f;
  }

  std::vector<double> darkmatter_density(double theta) const {
    const double beta = NonNestedModel::kDampingScale / theta;
    const double k = dens::damped_norm(beta, NonNestedModel::kSupportLo,
                                       NonNestedModel::kSupportHi);
    const double log_k = std::log(k);
    std::vector<double> g;
    g.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      g.push_back(std::exp(-1.5 * log_y[i] - beta * y[i] - log_k));
    }
    return g;
  }
};

double mixture_loglik(const std::vector<double>& f, const std::vector<double>& g,
                      double eta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    ll += std::log(std::max((1.0 - eta) * f[i] + eta * g[i], 1e-300));
  }
  return ll;
}

}  // namespace

NonNestedModel::NonNestedModel(TestDirection direction, double null_param,
                               std::pair<double, double> theta_range,
                               std::pair<double, double> phi_range)
    : direction_(direction),
      null_param_(null_param),
      theta_range_(theta_range),
      phi_range_(phi_range) {
  if (direction_ == TestDirection::kTwoSided) {
    throw std::invalid_argument("nonnested: direction must be detection or exclusion");
  }
  if (theta_range_.first < kSupportLo || theta_range_.second > kSupportHi ||
      !(theta_range_.first < theta_range_.second)) {
    throw std::invalid_argument("nonnested: theta range must lie inside [1, 100]");
  }
  if (!(phi_range_.first > 0.0) || !(phi_range_.first < phi_range_.second)) {
    throw std::invalid_argument("nonnested: bad phi range");
  }
  if (!(null_param_ > 0.0)) {
    throw std::invalid_argument("nonnested: null parameter must be > 0");
  }
}

std::pair<double, double> NonNestedModel::search_range() const {
  return direction_ == TestDirection::kExclusion ? phi_range_ : theta_range_;
}

Dataset NonNestedModel::simulate(const ParamMap& params, std::size_t n,
                                 std::uint64_t seed) const {
  const double eta = param_or(params, "eta", 0.0);
  const double phi = param_or(params, "phi", 1.4);
  const double theta = param_or(params, "theta", 35.0);
  if (eta < 0.0 || eta > 1.0) {
    throw std::invalid_argument("nonnested.simulate: eta must lie in [0, 1]");
  }
  if (!(phi > 0.0) || !(theta > 0.0)) {
    throw std::invalid_argument("nonnested.simulate: phi and theta must be > 0");
  }
  if (n < 1) throw std::invalid_argument("nonnested.simulate: n must be >= 1");

  Rng rng(seed);
  EventData data;
  data.y.reserve(n);
  const double beta = kDampingScale / theta;
  for (std::size_t i = 0; i < n; ++i) {
    const bool dark = rng.uniform01() < eta;
    const double u = rng.uniform01();
    if (dark) {
      data.y.push_back(dens::damped_inverse_cdf(u, beta, kSupportLo, kSupportHi));
    } else {
      data.y.push_back(dens::pareto_inverse_cdf(u, phi, kSupportLo, kSupportHi));
    }
  }
  return data;
}

NullFit NonNestedModel::fit_null(const Dataset& data) const {
  const Workspace ws(expect_events(data, "nonnested.fit_null"));
  if (direction_ == TestDirection::kExclusion) {
    // H0: eta = 1. theta is identifiable under this null; maximize over it.
    const auto res = maximize_scalar(
        [&](double theta) { return ws.darkmatter_loglik(theta); },
        theta_range_.first, theta_range_.second, OptimizerSettings{});
    return {{res.argmax[0]}, res.max};
  }
  const auto res =
      maximize_scalar([&](double phi) { return ws.powerlaw_loglik(phi); },
                      kPhiFitLo, kPhiFitHi, OptimizerSettings{});
  return {{res.argmax[0]}, res.max};
}

ProfileFit NonNestedModel::fit_profile(const Dataset& data, double grid_point,
                                       const ProfileFit* warm,
                                       const NullFit& null_fit) const {
  const Workspace ws(expect_events(data, "nonnested.fit_profile"));
  OptimizerSettings settings;
  settings.restarts = warm != nullptr ? 0 : 2;

  if (direction_ == TestDirection::kExclusion) {
    // Grid point is a power-law index; profile (eta, theta).
    const std::vector<double> f = ws.powerlaw_density(grid_point);
    const double theta0 = null_fit.params.at(0);
    std::vector<std::vector<double>> starts;
    if (warm != nullptr) starts.push_back({warm->eta_hat, warm->nuisance.at(0)});
    starts.push_back({1.0, theta0});   // the null itself
    starts.push_back({0.95, theta0});  // just inside the boundary
    const auto res = maximize_bounded(
        [&](const std::vector<double>& p) {
          return mixture_loglik(f, ws.darkmatter_density(p[1]), p[0]);
        },
        {{0.0, 1.0}, theta_range_}, settings, starts);
    ProfileFit fit;
    fit.eta_hat = res.argmax[0];
    fit.nuisance = {res.argmax[1]};
    fit.loglik1 = std::max(res.max, null_fit.loglik0);
    fit.degenerate = res.argmax[0] < 1e-8 ||
                     res.argmax[1] < theta_range_.first + 1e-8 ||
                     res.argmax[1] > theta_range_.second - 1e-8;
    return fit;
  }

  // Detection: grid point is theta; profile (eta, phi).
  const std::vector<double> g = ws.darkmatter_density(grid_point);
  const double phi0 = null_fit.params.at(0);
  std::vector<std::vector<double>> starts;
  if (warm != nullptr) starts.push_back({warm->eta_hat, warm->nuisance.at(0)});
  starts.push_back({0.0, phi0});
  starts.push_back({0.05, phi0});
  const auto res = maximize_bounded(
      [&](const std::vector<double>& p) {
        return mixture_loglik(ws.powerlaw_density(p[1]), g, p[0]);
      },
      {{0.0, 1.0}, {kPhiFitLo, kPhiFitHi}}, settings, starts);
  ProfileFit fit;
  fit.eta_hat = res.argmax[0];
  fit.nuisance = {res.argmax[1]};
  fit.loglik1 = std::max(res.max, null_fit.loglik0);
  fit.degenerate = res.argmax[0] > 1.0 - 1e-8 ||
                   res.argmax[1] < kPhiFitLo + 1e-8 ||
                   res.argmax[1] > kPhiFitHi - 1e-8;
  return fit;
}

ParamMap NonNestedModel::null_simulation_params() const {
  if (direction_ == TestDirection::kExclusion) {
    return {{"eta", 1.0}, {"theta", null_param_}};
  }
  return {{"eta", 0.0}, {"phi", null_param_}};
}

SubTestModel::ScoreLoglik NonNestedModel::score_loglik(
    const Dataset& data, double grid_point) const {
  const EventData& events = expect_events(data, "nonnested.score_loglik");
  auto ws = std::make_shared<Workspace>(events);
  if (direction_ == TestDirection::kExclusion) {
    auto f = std::make_shared<std::vector<double>>(
        ws->powerlaw_density(grid_point));
    return [ws, f](double eta, const std::vector<double>& params) {
      return mixture_loglik(*f, ws->darkmatter_density(params.at(0)), eta);
    };
  }
  auto g = std::make_shared<std::vector<double>>(
      ws->darkmatter_density(grid_point));
  return [ws, g](double eta, const std::vector<double>& params) {
    return mixture_loglik(ws->powerlaw_density(params.at(0)), *g, eta);
  };
}

double NonNestedModel::loglik(const EventData& data, double eta, double phi,
                              double theta) const {
  const Workspace ws(data);
  return mixture_loglik(ws.powerlaw_density(phi), ws.darkmatter_density(theta),
                        eta);
}

}  // namespace tohm

#include "tohm/models/bump.hpp"

#include <cmath>

#include "tohm/models/densities.hpp"
#include "tohm/optimize.hpp"
#include "tohm/rng.hpp"

namespace tohm {

namespace {

constexpr double kPhiLo = 0.05;
constexpr double kPhiHi = 8.0;

struct BumpWorkspace {
  std::vector<double> log_y;
  double sum_log_y = 0.0;

  explicit BumpWorkspace(const EventData& data) {
    log_y.reserve(data.y.size());
    for (double y : data.y) {
      if (!(y >= BumpModel::kSupportLo) || !(y <= BumpModel::kSupportHi)) {
        throw std::invalid_argument("bump: observation outside [1, 35]");
      }
      log_y.push_back(std::log(y));
      sum_log_y += log_y.back();
    }
  }

  double n() const { return static_cast<double>(log_y.size()); }

  double null_loglik(double phi) const {
    const double k =
        dens::pareto_norm(phi, BumpModel::kSupportLo, BumpModel::kSupportHi);
    return -(phi + 1.0) * sum_log_y - n() * std::log(k);
  }
};

// Bump component density values at fixed theta, one per observation.
std::vector<double> bump_component(const EventData& data, double theta) {
  const double sigma = BumpModel::kRelativeWidth * theta;
  const double k = dens::gauss_bump_norm(theta, sigma, BumpModel::kSupportLo,
                                         BumpModel::kSupportHi);
  std::vector<double> g;
  g.reserve(data.y.size());
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  for (double y : data.y) {
    const double d = y - theta;
    g.push_back(std::exp(-d * d * inv2s2) / k);
  }
  return g;
}

double mixture_loglik(const BumpWorkspace& ws, const std::vector<double>& g,
                      double eta, double phi) {
  const double k =
      dens::pareto_norm(phi, BumpModel::kSupportLo, BumpModel::kSupportHi);
  const double log_k = std::log(k);
  double ll = 0.0;
  for (std::size_t i = 0; i < ws.log_y.size(); ++i) {
    const double f = std::exp(-(phi + 1.0) * ws.log_y[i] - log_k);
    const double dens = (1.0 - eta) * f + eta * g[i];
    ll += std::log(std::max(dens, 1e-300));
  }
  return ll;
}

}  // namespace

BumpModel::BumpModel(double null_phi, std::pair<double, double> theta_range)
    : null_phi_(null_phi), theta_range_(theta_range) {
  if (!(null_phi > 0.0)) {
    throw std::invalid_argument("bump: power-law index must be > 0");
  }
  if (theta_range_.first < kSupportLo || theta_range_.second > kSupportHi ||
      !(theta_range_.first < theta_range_.second)) {
    throw std::invalid_argument("bump: theta range must lie inside [1, 35]");
  }
}

Dataset BumpModel::simulate(const ParamMap& params, std::size_t n,
                            std::uint64_t seed) const {
  const double eta = param_or(params, "eta", 0.0);
  const double phi = require_param(params, "phi", "bump.simulate");
  const double theta = param_or(params, "theta", 0.5 * (kSupportLo + kSupportHi));
  if (eta < 0.0 || eta > 1.0) {
    throw std::invalid_argument("bump.simulate: eta must lie in [0, 1]");
  }
  if (!(phi > 0.0)) {
    throw std::invalid_argument("bump.simulate: phi must be > 0");
  }
  if (theta < kSupportLo || theta > kSupportHi) {
    throw std::invalid_argument("bump.simulate: theta must lie in [1, 35]");
  }
  if (n < 1) throw std::invalid_argument("bump.simulate: n must be >= 1");

  Rng rng(seed);
  EventData data;
  data.y.reserve(n);
  const double sigma = kRelativeWidth * theta;
  for (std::size_t i = 0; i < n; ++i) {
    const bool signal = rng.uniform01() < eta;
    const double u = rng.uniform01();
    if (signal) {
      data.y.push_back(
          dens::gauss_bump_inverse_cdf(u, theta, sigma, kSupportLo, kSupportHi));
    } else {
      data.y.push_back(dens::pareto_inverse_cdf(u, phi, kSupportLo, kSupportHi));
    }
  }
  return data;
}

NullFit BumpModel::fit_null(const Dataset& data) const {
  const BumpWorkspace ws(expect_events(data, "bump.fit_null"));
  const auto res = maximize_scalar([&](double phi) { return ws.null_loglik(phi); },
                                   kPhiLo, kPhiHi, OptimizerSettings{});
  return {{res.argmax[0]}, res.max};
}

ProfileFit BumpModel::fit_profile(const Dataset& data, double theta_r,
                                  const ProfileFit* warm,
                                  const NullFit& null_fit) const {
  const EventData& events = expect_events(data, "bump.fit_profile");
  if (theta_r < theta_range_.first || theta_r > theta_range_.second) {
    throw std::invalid_argument("bump.fit_profile: theta_r outside range");
  }
  const BumpWorkspace ws(events);
  const std::vector<double> g = bump_component(events, theta_r);

  const double phi0 = null_fit.params.at(0);
  std::vector<std::vector<double>> starts;
  if (warm != nullptr) starts.push_back({warm->eta_hat, warm->nuisance.at(0)});
  starts.push_back({0.0, phi0});   // null anchor: loglik1 >= loglik0
  starts.push_back({0.05, phi0});  // nudge off the boundary face

  OptimizerSettings settings;
  settings.restarts = warm != nullptr ? 0 : 2;
  const auto res = maximize_bounded(
      [&](const std::vector<double>& p) {
        return mixture_loglik(ws, g, p[0], p[1]);
      },
      {{0.0, 1.0}, {kPhiLo, kPhiHi}}, settings, starts);

  ProfileFit fit;
  fit.eta_hat = res.argmax[0];
  fit.nuisance = {res.argmax[1]};
  fit.loglik1 = std::max(res.max, null_fit.loglik0);
  fit.degenerate = res.argmax[0] > 1.0 - 1e-8 ||
                   res.argmax[1] < kPhiLo + 1e-8 || res.argmax[1] > kPhiHi - 1e-8;
  return fit;
}

ParamMap BumpModel::null_simulation_params() const {
  return {{"eta", 0.0}, {"phi", null_phi_}};
}

SubTestModel::ScoreLoglik BumpModel::score_loglik(const Dataset& data,
                                                  double theta_r) const {
  const EventData& events = expect_events(data, "bump.score_loglik");
  auto ws = std::make_shared<BumpWorkspace>(events);
  auto g = std::make_shared<std::vector<double>>(bump_component(events, theta_r));
  return [ws, g](double eta, const std::vector<double>& params) {
    return mixture_loglik(*ws, *g, eta, params.at(0));
  };
}

double BumpModel::loglik(const EventData& data, double eta, double phi,
                         double theta) const {
  const BumpWorkspace ws(data);
  return mixture_loglik(ws, bump_component(data, theta), eta, phi);
}

}  // namespace tohm

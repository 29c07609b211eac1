#include "tohm/models/breakpoint.hpp"

#include <cmath>

#include "tohm/optimize.hpp"
#include "tohm/rng.hpp"

namespace tohm {

namespace {

constexpr double kInterceptLo = -40.0, kInterceptHi = 10.0;
constexpr double kSlopeLo = -3.0, kSlopeHi = 3.0;
constexpr double kXiLo = -5.0, kXiHi = 5.0;

double softplus(double z) {
  if (z > 30.0) return z;
  if (z < -30.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

// Binomial log-likelihood up to the fixed combinatorial constant.
double grouped_loglik(const GroupedBinomData& data, double phi1, double phi2,
                      double xi, double theta) {
  double ll = 0.0;
  for (const auto& row : data.rows) {
    const double z =
        phi1 + phi2 * row.x + (row.x >= theta ? xi * (row.x - theta) : 0.0);
    ll += row.cases * z - row.trials * softplus(z);
  }
  return ll;
}

// Weighted least squares on empirical logits; a starting point for the
// simplex, not an estimator.
std::pair<double, double> rough_logit_line(const GroupedBinomData& data) {
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& row : data.rows) {
    const double p =
        (row.cases + 0.5) / (row.trials + 1.0);  // shrink away from 0 and 1
    const double logit = std::log(p / (1.0 - p));
    const double w = row.trials * p * (1.0 - p);
    sw += w;
    sx += w * row.x;
    sy += w * logit;
    sxx += w * row.x * row.x;
    sxy += w * row.x * logit;
  }
  const double det = sw * sxx - sx * sx;
  if (std::fabs(det) < 1e-12) return {sy / std::max(sw, 1e-12), 0.0};
  const double slope = (sw * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / sw;
  return {intercept, slope};
}

double clamp_box(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

}  // namespace

BreakpointModel::BreakpointModel(double null_phi1, double null_phi2,
                                 std::pair<double, double> theta_range,
                                 std::vector<double> design_x,
                                 long trials_per_group)
    : null_phi1_(null_phi1),
      null_phi2_(null_phi2),
      theta_range_(theta_range),
      design_x_(std::move(design_x)),
      trials_per_group_(trials_per_group) {
  if (design_x_.empty()) {
    for (int age = 17; age <= 47; ++age) design_x_.push_back(age);
  }
  if (!(theta_range_.first < theta_range_.second)) {
    throw std::invalid_argument("breakpoint: bad theta range");
  }
  if (trials_per_group_ < 1) {
    throw std::invalid_argument("breakpoint: trials per group must be >= 1");
  }
}

Dataset BreakpointModel::simulate(const ParamMap& params, std::size_t n,
                                  std::uint64_t seed) const {
  const double phi1 = require_param(params, "phi1", "breakpoint.simulate");
  const double phi2 = require_param(params, "phi2", "breakpoint.simulate");
  const double xi = param_or(params, "xi", 0.0);
  const double theta =
      param_or(params, "theta", 0.5 * (theta_range_.first + theta_range_.second));
  const long trials =
      n > 0 ? static_cast<long>(n) : trials_per_group_;  // n overrides per-group size

  Rng rng(seed);
  GroupedBinomData data;
  data.rows.reserve(design_x_.size());
  for (double x : design_x_) {
    const double z = phi1 + phi2 * x + (x >= theta ? xi * (x - theta) : 0.0);
    const double p = 1.0 / (1.0 + std::exp(-z));
    long cases = 0;
    for (long t = 0; t < trials; ++t) {
      if (rng.bernoulli(p)) ++cases;
    }
    data.rows.push_back({x, cases, trials});
  }
  return data;
}

NullFit BreakpointModel::fit_null(const Dataset& data) const {
  const GroupedBinomData& rows = expect_grouped(data, "breakpoint.fit_null");
  const auto [b0, b1] = rough_logit_line(rows);
  std::vector<std::vector<double>> starts;
  starts.push_back({clamp_box(b0, kInterceptLo, kInterceptHi),
                    clamp_box(b1, kSlopeLo, kSlopeHi)});
  const auto res = maximize_bounded(
      [&](const std::vector<double>& p) {
        return grouped_loglik(rows, p[0], p[1], 0.0, 0.0);
      },
      {{kInterceptLo, kInterceptHi}, {kSlopeLo, kSlopeHi}}, OptimizerSettings{},
      starts);
  return {{res.argmax[0], res.argmax[1]}, res.max};
}

ProfileFit BreakpointModel::fit_profile(const Dataset& data, double theta_r,
                                        const ProfileFit* warm,
                                        const NullFit& null_fit) const {
  const GroupedBinomData& rows = expect_grouped(data, "breakpoint.fit_profile");
  if (theta_r < theta_range_.first || theta_r > theta_range_.second) {
    throw std::invalid_argument("breakpoint.fit_profile: theta_r outside range");
  }
  const double p10 = null_fit.params.at(0);
  const double p20 = null_fit.params.at(1);
  std::vector<std::vector<double>> starts;
  if (warm != nullptr) {
    starts.push_back(
        {warm->nuisance.at(0), warm->nuisance.at(1), warm->eta_hat});
  }
  starts.push_back({p10, p20, 0.0});  // null anchor

  OptimizerSettings settings;
  settings.restarts = warm != nullptr ? 0 : 2;
  const auto res = maximize_bounded(
      [&](const std::vector<double>& p) {
        return grouped_loglik(rows, p[0], p[1], p[2], theta_r);
      },
      {{kInterceptLo, kInterceptHi}, {kSlopeLo, kSlopeHi}, {kXiLo, kXiHi}},
      settings, starts);

  ProfileFit fit;
  fit.eta_hat = res.argmax[2];  // xi
  fit.nuisance = {res.argmax[0], res.argmax[1]};
  fit.loglik1 = std::max(res.max, null_fit.loglik0);
  fit.degenerate = std::fabs(res.argmax[2] - kXiLo) < 1e-8 ||
                   std::fabs(res.argmax[2] - kXiHi) < 1e-8;
  return fit;
}

double BreakpointModel::subtest_stat(const NullFit& null_fit,
                                     const ProfileFit& profile) const {
  const double t = std::max(0.0, 2.0 * (profile.loglik1 - null_fit.loglik0));
  const double root = std::sqrt(t);
  return profile.eta_hat < 0.0 ? -root : root;
}

ParamMap BreakpointModel::null_simulation_params() const {
  return {{"phi1", null_phi1_}, {"phi2", null_phi2_}, {"xi", 0.0}};
}

SubTestModel::ScoreLoglik BreakpointModel::score_loglik(
    const Dataset& data, double theta_r) const {
  auto rows = std::make_shared<GroupedBinomData>(
      expect_grouped(data, "breakpoint.score_loglik"));
  return [rows, theta_r](double xi, const std::vector<double>& params) {
    return grouped_loglik(*rows, params.at(0), params.at(1), xi, theta_r);
  };
}

double BreakpointModel::loglik(const GroupedBinomData& data, double phi1,
                               double phi2, double xi, double theta) const {
  return grouped_loglik(data, phi1, phi2, xi, theta);
}

}  // namespace tohm

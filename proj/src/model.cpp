#include "tohm/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tohm/optimize.hpp"

namespace tohm {

std::string to_string(TestDirection d) {
  switch (d) {
    case TestDirection::kDetection:
      return "detection";
    case TestDirection::kExclusion:
      return "exclusion";
    case TestDirection::kTwoSided:
      return "twosided";
  }
  return "?";
}

double SubTestModel::subtest_stat(const NullFit& null_fit,
                                  const ProfileFit& profile) const {
  const double delta = profile.loglik1 - null_fit.loglik0;
  const double slack = 1e-6 * (1.0 + std::fabs(null_fit.loglik0));
  if (delta < -slack && direction() != TestDirection::kExclusion) {
    // The profile includes the null as a feasible point, so a genuinely
    // worse fit means the optimizer failed.
    throw FitError("profile log-likelihood below null log-likelihood",
                   profile.nuisance, profile.loglik1);
  }
  // Exclusion compares against a null whose own parameter was maximized
  // globally; grid points where the alternative cannot beat it carry a zero
  // statistic (the union-alternative LRT).
  return std::max(0.0, 2.0 * delta);
}

ProcessTrace SubTestModel::scan(const Dataset& data,
                                const ScanGrid& grid) const {
  check_grid(grid);
  const NullFit null_fit = fit_null(data);
  std::vector<double> values(grid.resolution());
  ProfileFit warm;
  bool have_warm = false;
  for (std::size_t r = 0; r < grid.resolution(); ++r) {
    try {
      const ProfileFit fit =
          fit_profile(data, grid[r], have_warm ? &warm : nullptr, null_fit);
      values[r] = subtest_stat(null_fit, fit);
      warm = fit;
      have_warm = true;
    } catch (const FitError& e) {
      throw ScanError(grid[r], e.what());
    }
  }
  return ProcessTrace(grid, std::move(values));
}

ProcessTrace SubTestModel::null_trace(const ScanGrid& grid, std::size_t n_obs,
                                      std::uint64_t seed) const {
  const Dataset data = simulate(null_simulation_params(), n_obs, seed);
  return scan(data, grid);
}

void SubTestModel::check_grid(const ScanGrid& grid) const {
  const auto [lo, hi] = search_range();
  if (grid.lower() < lo - 1e-12 || grid.upper() > hi + 1e-12) {
    throw std::invalid_argument(
        name() + ": grid [" + std::to_string(grid.lower()) + ", " +
        std::to_string(grid.upper()) + "] outside search range [" +
        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

void write_events_csv(const EventData& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "y\n";
  out.precision(17);
  for (double v : data.y) out << v << '\n';
}

EventData read_events_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("event CSV: empty file: " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "y") {
    throw std::invalid_argument("event CSV: expected header 'y' in " + path);
  }
  EventData data;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    double v;
    if (!(row >> v) || !std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument("event CSV: bad value at line " +
                                  std::to_string(lineno) + " of " + path);
    }
    data.y.push_back(v);
  }
  if (data.y.empty()) {
    throw std::invalid_argument("event CSV: no rows in " + path);
  }
  return data;
}

void write_grouped_csv(const GroupedBinomData& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "x,cases,trials\n";
  out.precision(17);
  for (const auto& row : data.rows) {
    out << row.x << ',' << row.cases << ',' << row.trials << '\n';
  }
}

GroupedBinomData read_grouped_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("grouped CSV: empty file: " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,cases,trials") {
    throw std::invalid_argument(
        "grouped CSV: expected header 'x,cases,trials' in " + path);
  }
  GroupedBinomData data;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    GroupedBinomRow r;
    char c1, c2;
    if (!(row >> r.x >> c1 >> r.cases >> c2 >> r.trials) || c1 != ',' ||
        c2 != ',' || r.cases < 0 || r.trials < 1 || r.cases > r.trials) {
      throw std::invalid_argument("grouped CSV: bad row at line " +
                                  std::to_string(lineno) + " of " + path);
    }
    data.rows.push_back(r);
  }
  if (data.rows.empty()) {
    throw std::invalid_argument("grouped CSV: no rows in " + path);
  }
  return data;
}

const EventData& expect_events(const Dataset& data, const std::string& who) {
  if (const auto* d = std::get_if<EventData>(&data)) return *d;
  throw std::invalid_argument(who + ": expected an event dataset");
}

const GroupedBinomData& expect_grouped(const Dataset& data,
                                       const std::string& who) {
  if (const auto* d = std::get_if<GroupedBinomData>(&data)) return *d;
  throw std::invalid_argument(who + ": expected a grouped binomial dataset");
}

double param_or(const ParamMap& params, const std::string& key,
                double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double require_param(const ParamMap& params, const std::string& key,
                     const std::string& who) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw std::invalid_argument(who + ": missing parameter '" + key + "'");
  }
  return it->second;
}

}  // namespace tohm

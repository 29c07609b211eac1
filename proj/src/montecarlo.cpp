#include "tohm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "tohm/optimize.hpp"
#include "tohm/rng.hpp"

namespace tohm {

namespace {

std::pair<double, double> mean_and_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, sd / std::sqrt(n)};
}

std::pair<double, double> count_stats(const std::vector<std::uint32_t>& counts,
                                      const std::vector<bool>& ok) {
  std::vector<double> vals;
  vals.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (ok[i]) vals.push_back(counts[i]);
  }
  return mean_and_se(vals);
}

void check_failures(const McSettings& settings,
                    const std::vector<std::uint64_t>& failed) {
  const double frac = static_cast<double>(failed.size()) /
                      static_cast<double>(settings.n_replicates);
  if (!failed.empty() && frac > settings.max_failure_fraction) {
    std::string msg = "ensemble: " + std::to_string(failed.size()) + " of " +
                      std::to_string(settings.n_replicates) +
                      " replicates failed to fit; seeds:";
    for (std::size_t i = 0; i < std::min<std::size_t>(failed.size(), 16); ++i) {
      msg += " " + std::to_string(failed[i]);
    }
    throw EnsembleError(msg, failed);
  }
}

}  // namespace

void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t nthreads =
      std::min<std::size_t>(std::max(workers, 1), n);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mu;
  const std::size_t chunk = (n + nthreads - 1) / nthreads;
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

McEnsemble estimate_upcrossings(const SubTestModel& model, const ScanGrid& grid,
                                double c0, const McSettings& settings) {
  if (settings.n_replicates < 2) {
    throw std::invalid_argument("ensemble: need at least two replicates");
  }
  if (!std::isfinite(c0)) {
    throw std::invalid_argument("ensemble: c0 must be finite");
  }
  model.check_grid(grid);

  const std::size_t n = settings.n_replicates;
  std::vector<ProcessTrace> traces;
  if (settings.keep_traces) {
    traces.assign(n, ProcessTrace(grid, std::vector<double>(grid.resolution())));
  }
  std::vector<std::uint32_t> ups(n, 0), exs(n, 0);
  std::vector<bool> ok(n, false);
  std::vector<std::uint64_t> seeds(n);
  for (std::size_t r = 0; r < n; ++r) {
    seeds[r] = replicate_seed(settings.master_seed, r);
  }

  parallel_for(n, settings.workers, [&](std::size_t r) {
    try {
      ProcessTrace trace = model.null_trace(grid, settings.n_obs, seeds[r]);
      ups[r] = static_cast<std::uint32_t>(count_upcrossings(trace, c0));
      exs[r] = static_cast<std::uint32_t>(count_exceedances(trace, c0));
      if (settings.keep_traces) traces[r] = std::move(trace);
      ok[r] = true;
    } catch (const FitError&) {
      ok[r] = false;
    } catch (const ScanError&) {
      ok[r] = false;
    }
  });

  McEnsemble ens;
  ens.n_replicates = n;
  ens.n_obs = settings.n_obs;
  ens.master_seed = settings.master_seed;
  ens.c0 = c0;
  for (std::size_t r = 0; r < n; ++r) {
    if (!ok[r]) ens.failed_seeds.push_back(seeds[r]);
  }
  check_failures(settings, ens.failed_seeds);

  if (settings.keep_traces) {
    // Drop failed slots, preserving replicate order.
    ens.traces.reserve(n - ens.failed_seeds.size());
    for (std::size_t r = 0; r < n; ++r) {
      if (ok[r]) ens.traces.push_back(std::move(traces[r]));
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (ok[r]) {
      ens.upcross_counts.push_back(ups[r]);
      ens.exceed_counts.push_back(exs[r]);
    }
  }
  std::vector<bool> all_ok(ens.upcross_counts.size(), true);
  std::tie(ens.e_upcrossings, ens.mc_std_error) =
      count_stats(ens.upcross_counts, all_ok);
  std::tie(ens.e_exceedances, ens.mc_std_error_exceedances) =
      count_stats(ens.exceed_counts, all_ok);
  return ens;
}

std::pair<double, double> ensemble_mean_upcrossings(const McEnsemble& ensemble,
                                                    double c) {
  if (ensemble.traces.empty()) {
    throw std::invalid_argument("ensemble: traces were not kept");
  }
  std::vector<double> counts;
  counts.reserve(ensemble.traces.size());
  for (const auto& t : ensemble.traces) {
    counts.push_back(static_cast<double>(count_upcrossings(t, c)));
  }
  return mean_and_se(counts);
}

std::pair<double, double> ensemble_mean_exceedances(const McEnsemble& ensemble,
                                                    double c) {
  if (ensemble.traces.empty()) {
    throw std::invalid_argument("ensemble: traces were not kept");
  }
  std::vector<double> counts;
  counts.reserve(ensemble.traces.size());
  for (const auto& t : ensemble.traces) {
    counts.push_back(static_cast<double>(count_exceedances(t, c)));
  }
  return mean_and_se(counts);
}

std::vector<ElbowRow> upcrossing_curve(const SubTestModel& model, double c0,
                                       const std::vector<std::size_t>& resolutions,
                                       const McSettings& settings) {
  if (resolutions.empty() ||
      !std::is_sorted(resolutions.begin(), resolutions.end())) {
    throw std::invalid_argument(
        "upcrossing_curve: resolutions must be sorted ascending");
  }
  const auto [lo, hi] = model.search_range();
  std::vector<ElbowRow> rows;
  McSettings s = settings;
  s.keep_traces = false;
  for (std::size_t r : resolutions) {
    const ScanGrid grid = ScanGrid::equally_spaced(lo, hi, r);
    const McEnsemble ens = estimate_upcrossings(model, grid, c0, s);
    rows.push_back({r, ens.e_upcrossings, ens.mc_std_error});
  }
  return rows;
}

SensitivityResult c0_sensitivity(const SubTestModel& model,
                                 const ScanGrid& grid, std::size_t n_paths,
                                 std::uint64_t master_seed, std::size_t n_obs,
                                 int workers) {
  if (n_paths < 1) {
    throw std::invalid_argument("c0_sensitivity: need at least one path");
  }
  McSettings s;
  s.n_replicates = std::max<std::size_t>(n_paths, 2);
  s.n_obs = n_obs;
  s.master_seed = master_seed;
  s.workers = workers;
  s.keep_traces = true;
  // Threshold placement needs paths, not counts; reuse the ensemble driver
  // with a placeholder threshold.
  McEnsemble ens = estimate_upcrossings(model, grid, 0.0, s);
  ens.traces.resize(std::min<std::size_t>(ens.traces.size(), n_paths),
                    ProcessTrace(grid, std::vector<double>(grid.resolution())));

  SensitivityResult res;
  res.paths = std::move(ens.traces);

  double vmin = std::numeric_limits<double>::infinity();
  std::vector<double> pooled;
  for (const auto& t : res.paths) {
    for (double v : t.values) {
      vmin = std::min(vmin, v);
      pooled.push_back(v);
    }
  }
  std::sort(pooled.begin(), pooled.end());
  const double vhi = pooled[static_cast<std::size_t>(0.98 * (pooled.size() - 1))];

  const int n_ladder = 41;
  res.ladder.reserve(n_ladder);
  if (vhi > vmin) {
    for (int i = 0; i < n_ladder; ++i) {
      res.ladder.push_back(vmin + (vhi - vmin) * i / (n_ladder - 1));
    }
  } else {
    res.ladder.push_back(vmin);
  }

  res.recommended_c0 = res.ladder.front();
  double best = -1.0;
  for (double c : res.ladder) {
    double mean = 0.0;
    for (const auto& t : res.paths) {
      mean += static_cast<double>(count_upcrossings(t, c));
    }
    mean /= static_cast<double>(res.paths.size());
    res.mean_upcrossings.push_back(mean);
    if (mean > best) {
      best = mean;
      res.recommended_c0 = c;
    }
  }
  return res;
}

std::vector<OracleRow> oracle_pvalue(const SubTestModel& model,
                                     const ScanGrid& grid,
                                     const std::vector<double>& thresholds,
                                     const McSettings& settings) {
  if (settings.n_replicates < 100) {
    throw std::invalid_argument("oracle_pvalue: need at least 100 replicates");
  }
  if (thresholds.empty()) {
    throw std::invalid_argument("oracle_pvalue: empty threshold ladder");
  }
  model.check_grid(grid);

  const std::size_t n = settings.n_replicates;
  std::vector<double> maxima(n, 0.0);
  std::vector<bool> ok(n, false);
  std::vector<std::uint64_t> seeds(n);
  for (std::size_t r = 0; r < n; ++r) {
    seeds[r] = replicate_seed(settings.master_seed, r);
  }
  parallel_for(n, settings.workers, [&](std::size_t r) {
    try {
      const ProcessTrace trace = model.null_trace(grid, settings.n_obs, seeds[r]);
      maxima[r] = global_max(trace).c_r;
      ok[r] = true;
    } catch (const FitError&) {
      ok[r] = false;
    } catch (const ScanError&) {
      ok[r] = false;
    }
  });

  std::vector<std::uint64_t> failed;
  for (std::size_t r = 0; r < n; ++r) {
    if (!ok[r]) failed.push_back(seeds[r]);
  }
  check_failures(settings, failed);
  const double n_ok = static_cast<double>(n - failed.size());

  std::vector<OracleRow> rows;
  rows.reserve(thresholds.size());
  for (double c : thresholds) {
    double hits = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (ok[r] && maxima[r] > c) hits += 1.0;
    }
    const double p = hits / n_ok;
    rows.push_back({c, p, std::sqrt(p * (1.0 - p) / n_ok)});
  }
  return rows;
}

std::string ensemble_summary_json(const McEnsemble& ensemble) {
  nlohmann::json j;
  j["n_replicates"] = ensemble.n_replicates;
  j["n_obs"] = ensemble.n_obs;
  j["master_seed"] = ensemble.master_seed;
  j["c0"] = ensemble.c0;
  j["e_upcrossings"] = ensemble.e_upcrossings;
  j["mc_std_error"] = ensemble.mc_std_error;
  return j.dump(2) + "\n";
}

McEnsemble ensemble_summary_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("ensemble JSON: ") + e.what());
  }
  McEnsemble ens;
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) {
      throw std::invalid_argument(std::string("ensemble JSON: missing '") +
                                  key + "'");
    }
    return j.at(key);
  };
  ens.n_replicates = need("n_replicates").get<std::size_t>();
  ens.n_obs = need("n_obs").get<std::size_t>();
  ens.master_seed = need("master_seed").get<std::uint64_t>();
  ens.c0 = need("c0").get<double>();
  ens.e_upcrossings = need("e_upcrossings").get<double>();
  ens.mc_std_error = need("mc_std_error").get<double>();
  if (ens.n_replicates < 2 || ens.e_upcrossings < 0.0 || ens.mc_std_error < 0.0) {
    throw std::invalid_argument("ensemble JSON: values out of range");
  }
  return ens;
}

void write_elbow_csv(const std::vector<ElbowRow>& rows,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "R,e_upcrossings,mc_err\n";
  out.precision(17);
  for (const auto& r : rows) {
    out << r.resolution << ',' << r.e_upcrossings << ',' << r.mc_err << '\n';
  }
}

void write_oracle_csv(const std::vector<OracleRow>& rows,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "c,p_hat,mc_err\n";
  out.precision(17);
  for (const auto& r : rows) {
    out << r.c << ',' << r.p_hat << ',' << r.mc_err << '\n';
  }
}

}  // namespace tohm

#include "tohm/grid.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tohm {

ScanGrid ScanGrid::equally_spaced(double lower, double upper, std::size_t r) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw std::invalid_argument("ScanGrid: requires finite lower < upper");
  }
  if (r < 2) throw std::invalid_argument("ScanGrid: resolution must be >= 2");
  std::vector<double> pts(r);
  for (std::size_t i = 0; i < r; ++i) {
    pts[i] = lower + (upper - lower) * static_cast<double>(i) /
                         static_cast<double>(r - 1);
  }
  pts.front() = lower;
  pts.back() = upper;
  return ScanGrid(std::move(pts));
}

ScanGrid ScanGrid::from_points(std::vector<double> points) {
  if (points.size() < 2) {
    throw std::invalid_argument("ScanGrid: needs at least two points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) {
      throw std::invalid_argument("ScanGrid: non-finite grid point");
    }
    if (i > 0 && !(points[i - 1] < points[i])) {
      throw std::invalid_argument("ScanGrid: points must be strictly increasing");
    }
  }
  return ScanGrid(std::move(points));
}

ProcessTrace::ProcessTrace(ScanGrid grid_, std::vector<double> values_)
    : grid(std::move(grid_)), values(std::move(values_)) {
  if (values.size() != grid.resolution()) {
    throw std::invalid_argument("ProcessTrace: values/grid size mismatch");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("ProcessTrace: non-finite statistic");
    }
  }
}

std::size_t count_upcrossings(const ProcessTrace& trace, double c) {
  if (!std::isfinite(c)) {
    throw std::invalid_argument("count_upcrossings: threshold must be finite");
  }
  std::size_t n = 0;
  for (std::size_t r = 1; r < trace.values.size(); ++r) {
    if (trace.values[r - 1] <= c && trace.values[r] > c) ++n;
  }
  return n;
}

std::size_t count_exceedances(const ProcessTrace& trace, double c) {
  if (!std::isfinite(c)) {
    throw std::invalid_argument("count_exceedances: threshold must be finite");
  }
  std::size_t n = 0;
  for (double v : trace.values) {
    if (v > c) ++n;
  }
  return n;
}

GlobalMax global_max(const ProcessTrace& trace) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < trace.values.size(); ++r) {
    if (trace.values[r] > trace.values[best]) best = r;
  }
  return {trace.values[best], trace.grid[best]};
}

void write_trace_csv(const ProcessTrace& trace, std::ostream& out) {
  out << "theta,stat\n";
  out.precision(17);
  for (std::size_t r = 0; r < trace.values.size(); ++r) {
    out << trace.grid[r] << ',' << trace.values[r] << '\n';
  }
}

void write_trace_csv(const ProcessTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_trace_csv(trace, out);
}

ProcessTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("trace CSV: empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "theta,stat") {
    throw std::invalid_argument("trace CSV: expected header 'theta,stat', got '" +
                                line + "'");
  }
  std::vector<double> thetas, stats;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    double theta, stat;
    char comma;
    if (!(row >> theta >> comma >> stat) || comma != ',') {
      throw std::invalid_argument("trace CSV: malformed row at line " +
                                  std::to_string(lineno) + ": '" + line + "'");
    }
    std::string rest;
    if (row >> rest) {
      throw std::invalid_argument("trace CSV: trailing data at line " +
                                  std::to_string(lineno));
    }
    thetas.push_back(theta);
    stats.push_back(stat);
  }
  return ProcessTrace(ScanGrid::from_points(std::move(thetas)),
                      std::move(stats));
}

ProcessTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace CSV: " + path);
  return read_trace_csv(in);
}

}  // namespace tohm

#pragma once

// Scan grids and process traces: the evaluation grid for the scanned
// parameter and the sequence of sub-test statistics observed (or simulated)
// on it, plus upcrossing/exceedance counting and the discrete maximum.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace tohm {

class ScanGrid {
 public:
  // Equally spaced, both endpoints included. Requires lower < upper, r >= 2.
  static ScanGrid equally_spaced(double lower, double upper, std::size_t r);

  // Arbitrary strictly increasing points (at least two).
  static ScanGrid from_points(std::vector<double> points);

  double lower() const { return points_.front(); }
  double upper() const { return points_.back(); }
  std::size_t resolution() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }
  double operator[](std::size_t i) const { return points_[i]; }

 private:
  explicit ScanGrid(std::vector<double> points) : points_(std::move(points)) {}
  std::vector<double> points_;
};

struct ProcessTrace {
  ProcessTrace(ScanGrid grid, std::vector<double> values);

  ScanGrid grid;
  std::vector<double> values;  // one finite value per grid point
};

// Number of indices r >= 2 with values[r-1] <= c and values[r] > c.
std::size_t count_upcrossings(const ProcessTrace& trace, double c);

// Number of indices with values[r] > c.
std::size_t count_exceedances(const ProcessTrace& trace, double c);

struct GlobalMax {
  double c_r;
  double theta_hat;  // smallest grid point attaining the maximum
};

GlobalMax global_max(const ProcessTrace& trace);

// Trace file format: CSV, header "theta,stat", full-precision decimals.
void write_trace_csv(const ProcessTrace& trace, std::ostream& out);
void write_trace_csv(const ProcessTrace& trace, const std::string& path);
ProcessTrace read_trace_csv(std::istream& in);
ProcessTrace read_trace_csv(const std::string& path);

}  // namespace tohm

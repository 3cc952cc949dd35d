#pragma once

#include "grnn/network.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace grnn {

/// One swept input: `samples` uniform values on [lo, hi], both ends included.
struct Axis
{
  std::string input;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t samples = 200;

  std::vector<double> values() const;
  bool operator==(const Axis&) const = default;
};

enum class OutputScale {
  normalized, ///< Hill product in [0, 1]
  raw         ///< steady-state protein concentration
};

struct SweepConfig
{
  Axis x;
  Axis y;
  InputAssignment fixed; ///< values of the inputs that are not swept
  double threshold = 0.5;
  OutputScale scale = OutputScale::normalized;
  /// Worker threads; 0 uses the hardware count capped by GRNN_LAB_THREADS.
  std::size_t threads = 0;
};

struct ClassificationGrid
{
  Axis x;
  Axis y;
  std::vector<double> xs;
  std::vector<double> ys;
  double threshold = 0.5;
  OutputScale scale = OutputScale::normalized;
  std::vector<std::string> genes;          ///< topological order
  std::vector<std::vector<double>> values; ///< [gene][iy * nx + ix]

  std::size_t nx() const noexcept { return xs.size(); }
  std::size_t ny() const noexcept { return ys.size(); }
  std::size_t gene_slot(const std::string& id) const;
  double value(std::size_t gene, std::size_t ix, std::size_t iy) const
  {
    return values[gene][iy * xs.size() + ix];
  }
  /// value >= threshold, and strictly positive so that a silenced gene
  /// never counts as above a zero threshold.
  bool above(std::size_t gene, std::size_t ix, std::size_t iy) const;
  std::vector<std::uint8_t> mask(std::size_t gene) const;
};

/// Worker count for sweeps: hardware concurrency, capped by the
/// GRNN_LAB_THREADS environment variable when it holds a positive integer.
std::size_t sweep_threads();

ClassificationGrid sweep(const Grnn& net, const SweepConfig& cfg);

struct Point
{
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

using Polyline = std::vector<Point>;

struct RegionMetrics
{
  std::string gene;
  Axis x;
  Axis y;
  double threshold = 0.5;
  double area_fraction = 0.0;
  std::optional<std::pair<double, double>> x_extent; ///< empty when no point is above
  std::optional<std::pair<double, double>> y_extent;
  std::vector<Polyline> boundary; ///< closed loops repeat their first point
};

RegionMetrics extract_boundary(const ClassificationGrid& grid, const std::string& gene);

/// Signed differences b - a. Extent deltas are absent when either region
/// is empty.
struct RegionShift
{
  double area_fraction = 0.0;
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::optional<double> y_min;
  std::optional<double> y_max;
};

RegionShift compare_regions(const RegionMetrics& a, const RegionMetrics& b);

std::string to_string(OutputScale scale);

/// `x,y,<gene>...`, one row per grid point, x varying fastest.
void write_grid_csv(std::ostream& out, const ClassificationGrid& grid);

/// Plain PGM (P2) with 0/1 pixels; the first row is the largest y.
void write_mask_pgm(std::ostream& out, const ClassificationGrid& grid, const std::string& gene);

void write_metrics_json(std::ostream& out, const RegionMetrics& metrics);

} // namespace grnn

#pragma once

#include "collarext/tensor_core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace collarext {

enum class CurvatureQuantity { sectional, ricci, scalar };
enum class Relation { less, less_equal, greater, greater_equal };

/// One curvature bound, e.g. "sect < 0" or "ric <= -0.1". Ricci bounds apply
/// to every eigenvalue of g^{-1} Ric. `slack` widens the bound for the
/// verdict (value + slack for upper bounds, value - slack for lower bounds).
struct BoundSpec {
  CurvatureQuantity quantity = CurvatureQuantity::sectional;
  Relation relation = Relation::less;
  double value = 0.0;
  double slack = 0.0;

  /// Parses "sect < 0", "Ric >= -2", "scal<1"; throws UsageError.
  static BoundSpec parse(const std::string& text);
  std::string description() const;
  bool holds(double sample) const;
  /// Distance to violation; negative when violated.
  double margin(double sample) const;
};

struct BoundVerdict {
  BoundSpec bound;
  bool holds = true;
  Vec worst_point;
  double worst_value = 0.0;
};

/// Per-grid-point record, kept when ReportOptions::keep_samples is set.
struct PointSample {
  Vec point;
  std::vector<double> sect;  // coordinate planes first, then random planes
  Vec ric_eigs;
  double scal = 0.0;
};

struct CurvatureReport {
  std::vector<int> grid_shape;
  std::size_t point_count = 0;
  std::size_t plane_sample_count = 0;
  double sect_min = 0.0, sect_max = 0.0;
  double ric_eig_min = 0.0, ric_eig_max = 0.0;
  double scal_min = 0.0, scal_max = 0.0;
  std::vector<BoundVerdict> bound_verdicts;
  std::vector<PointSample> samples;

  bool all_hold() const;
};

struct ReportOptions {
  std::vector<int> resolution;   // per axis, each >= 3; empty means 33 per axis
  int plane_samples = 8;
  std::uint64_t seed = 0;
  /// Sampling box; defaults to the chart box shrunk by 4 * fd_step.
  std::optional<Box> sample_box;
  /// Points where include(p) is false are skipped.
  std::function<bool(const Vec&)> include;
  bool keep_samples = false;
  Tolerances tol;
};

/// Grid points of `box` in row-major order (last axis fastest), endpoints
/// included.
std::vector<Vec> grid_points(const Box& box, const std::vector<int>& resolution);

/// Samples sectional (coordinate planes plus random planes), Ricci
/// eigen-ratios and scalar curvature on a grid and checks each bound.
/// A verdict holds iff the bound is satisfied at every sampled value.
CurvatureReport grid_curvature_report(const ChartMetric& g, const std::vector<BoundSpec>& bounds,
                                      const ReportOptions& options = {});

}  // namespace collarext

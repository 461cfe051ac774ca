#pragma once

#include "collarext/tensor_core.hpp"

#include <vector>

namespace collarext {

/// Samples of a geodesic c(t) with c(0) = p0, c'(0) = v0, one per step.
struct GeodesicPath {
  std::vector<double> t;
  std::vector<Vec> x;
  std::vector<Vec> v;
  bool exited = false;  // stopped because the stencil would leave the chart box
  double exit_time = 0.0;

  double speed(const ChartMetric& g, std::size_t i) const;
};

/// Fixed-step classical Runge-Kutta integration of c'' = -Gamma(c)(c', c').
/// Halts early (exited = true) when the next stage point lies within the
/// Christoffel clearance of the box boundary. Throws UsageError for
/// step <= 0 or T <= 0.
GeodesicPath shoot_geodesic(const ChartMetric& g, const Vec& p0, const Vec& v0, double T,
                            double step);

/// Largest | |c'(t)|_g - |c'(0)|_g | over the samples.
double speed_drift(const ChartMetric& g, const GeodesicPath& path);

}  // namespace collarext

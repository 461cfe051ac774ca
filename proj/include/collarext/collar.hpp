#pragma once

// Collar-form metrics ds^2 + h_s(x) in Fermi coordinates (s, x), with s the
// signed distance to the boundary slice s = 0 (negative inside, positive
// outside), and the shape-operator geometry of the slices.
//
// Shape operator convention: for the outward normal d_s the second
// fundamental form is II(X,Y) = g(-D_X d_s, Y) = -Hess(s)(X,Y), whose matrix
// in the slice coordinates is -(1/2) d_s h_s. Its eigenvalues relative to h_s
// are the principal values; the slice is convex when they are negative.

#include "collarext/tensor_core.hpp"

#include <functional>
#include <string>
#include <vector>

namespace collarext {

class CollarMetric {
 public:
  using Slice = std::function<Mat(double, const Vec&)>;

  CollarMetric(double s_min, double s_max, Box boundary_box, Slice slice);

  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }
  const Box& boundary_box() const { return boundary_box_; }
  int boundary_dim() const { return boundary_box_.dim(); }
  int dim() const { return boundary_dim() + 1; }

  /// Symmetrized slice metric h_s(x).
  Mat slice(double s, const Vec& x) const;
  /// Box (s_min, s_max) x boundary_box in chart coordinates (s, x).
  Box chart_box() const;
  /// Block metric diag(1, h_s(x)); fd_step <= 0 selects the chart default.
  ChartMetric as_chart(double fd_step = 0.0) const;

  /// Same slices on a narrower s-range.
  CollarMetric restricted(double s_min, double s_max) const;

 private:
  double s_min_, s_max_;
  Box boundary_box_;
  std::shared_ptr<const Slice> slice_;
};

/// How the warp factor enters the slice metric.
enum class WarpPower {
  squared,      // h_s = f(s)^2 g_base, the classical warped product
  first_power,  // h_s = f(s) g_base
};

struct WarpedProfile {
  std::function<double(double)> f;
  Mat base_metric;
  double s_min = 0.0, s_max = 1.0;
  Box base_box;

  CollarMetric to_collar(WarpPower power = WarpPower::squared) const;
};

struct ShapeSpectrum {
  double s = 0.0;
  Vec eigenvalues;  // ascending
};

/// Principal values of the slice through (s, x) from d_s h_s.
ShapeSpectrum shape_operator(const CollarMetric& c, double s, const Vec& x, double fd_step = 0.0);

/// Same quantity from the covariant Hessian of the coordinate function s
/// of the induced chart metric, restricted to the slice. Cross-check path.
ShapeSpectrum shape_operator_via_hessian(const CollarMetric& c, double s, const Vec& x,
                                         double fd_step = 0.0);

struct RiccatiSolution {
  std::vector<double> t;
  std::vector<double> lambda;
  bool escaped = false;
  double escape_time = 0.0;
};

/// Integrates lambda' = lambda^2 + K(t), lambda(0) = lambda0 on [0, T] with
/// classical Runge-Kutta, one sample per `step`. Inside a step the method
/// sub-steps so that |lambda| * h stays below 0.01, which locates finite
/// escapes (|lambda| > blowup_cap) to within the sub-step.
RiccatiSolution riccati_evolve(double lambda0, const std::function<double(double)>& K, double T,
                               double step, double blowup_cap = 1e6);

enum class Convexity { strictly_convex, convex, not_convex };
std::string to_string(Convexity c);

struct ConvexityVerdict {
  Convexity kind = Convexity::convex;
  double worst_eigenvalue = 0.0;  // largest sampled principal value
  Vec worst_point;
};

/// Classifies the s = 0 slice from principal values on a boundary grid
/// (>= 2 points per axis). Ties within convex_tol count as convex.
ConvexityVerdict convexity_classify(const CollarMetric& c, const std::vector<int>& grid,
                                    double convex_tol = 1e-8);

/// sup |d rho(v)| / |v| for the Fermi reflection rho(s, x) = (-s, x), sampled
/// over s in (0, s0], a boundary grid and all v. Never below 1 (radial v).
double fermi_reflection_norm(const CollarMetric& c, double s0, int s_samples = 64,
                             int x_resolution = 5);

}  // namespace collarext

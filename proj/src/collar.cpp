#include "collarext/collar.hpp"

#include "collarext/curvature_report.hpp"
#include "collarext/errors.hpp"

#include <algorithm>
#include <cmath>

namespace collarext {

CollarMetric::CollarMetric(double s_min, double s_max, Box boundary_box, Slice slice)
    : s_min_(s_min),
      s_max_(s_max),
      boundary_box_(std::move(boundary_box)),
      slice_(std::make_shared<const Slice>(std::move(slice))) {
  if (!(s_min < s_max)) throw UsageError("CollarMetric: empty s-range");
}

Mat CollarMetric::slice(double s, const Vec& x) const {
  const Mat h = (*slice_)(s, x);
  return 0.5 * (h + h.transpose());
}

Box CollarMetric::chart_box() const {
  const int n = boundary_dim();
  Vec lo(n + 1), hi(n + 1);
  lo[0] = s_min_;
  hi[0] = s_max_;
  lo.tail(n) = boundary_box_.lower;
  hi.tail(n) = boundary_box_.upper;
  return Box(lo, hi);
}

ChartMetric CollarMetric::as_chart(double fd_step) const {
  const CollarMetric self = *this;
  auto comps = [self](const Vec& p) -> Mat {
    const int n = self.boundary_dim();
    Mat g = Mat::Zero(n + 1, n + 1);
    g(0, 0) = 1.0;
    g.bottomRightCorner(n, n) = self.slice(p[0], p.tail(n));
    return g;
  };
  return ChartMetric(chart_box(), comps, fd_step);
}

CollarMetric CollarMetric::restricted(double s_min, double s_max) const {
  CollarMetric copy = *this;
  if (!(s_min < s_max)) throw UsageError("CollarMetric::restricted: empty s-range");
  copy.s_min_ = s_min;
  copy.s_max_ = s_max;
  return copy;
}

CollarMetric WarpedProfile::to_collar(WarpPower power) const {
  const auto fn = f;
  const Mat base = base_metric;
  if (base.rows() != base_box.dim()) {
    throw UsageError("WarpedProfile: base metric size does not match base box");
  }
  auto slice = [fn, base, power](double s, const Vec&) -> Mat {
    const double w = fn(s);
    return (power == WarpPower::squared ? w * w : w) * base;
  };
  return CollarMetric(s_min, s_max, base_box, slice);
}

namespace {

double default_step(const CollarMetric& c) { return 1e-4 * c.chart_box().shortest_side(); }

Vec sorted_generalized_eigs(const Mat& a, const Mat& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(a, b, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw DefinitenessError("slice metric not positive definite");
  }
  Vec ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

}  // namespace

ShapeSpectrum shape_operator(const CollarMetric& c, double s, const Vec& x, double fd_step) {
  const double h = fd_step > 0.0 ? fd_step : default_step(c);
  if (s - 2.0 * h <= c.s_min() || s + 2.0 * h >= c.s_max()) {
    throw ClearanceError("shape_operator: s too close to the end of the collar");
  }
  const Mat hs = c.slice(s, x);
  const Mat ds = (c.slice(s + h, x) - c.slice(s - h, x)) / (2.0 * h);
  return {s, sorted_generalized_eigs(-0.5 * ds, hs)};
}

ShapeSpectrum shape_operator_via_hessian(const CollarMetric& c, double s, const Vec& x,
                                         double fd_step) {
  const ChartMetric g = c.as_chart(fd_step);
  const ScalarField sfield{g.domain(), [](const Vec& p) { return p[0]; }};
  Vec p(c.dim());
  p[0] = s;
  p.tail(c.boundary_dim()) = x;
  const Mat H = hessian(g, sfield, p);
  const int n = c.boundary_dim();
  const Mat slice_hess = H.bottomRightCorner(n, n);
  return {s, sorted_generalized_eigs(-slice_hess, c.slice(s, x))};
}

RiccatiSolution riccati_evolve(double lambda0, const std::function<double(double)>& K, double T,
                               double step, double blowup_cap) {
  if (!(step > 0.0)) throw UsageError("riccati_evolve: step must be positive");
  if (!(T >= 0.0)) throw UsageError("riccati_evolve: T must be non-negative");
  RiccatiSolution sol;
  sol.t.push_back(0.0);
  sol.lambda.push_back(lambda0);
  auto rhs = [&](double t, double l) { return l * l + K(t); };
  double t = 0.0, l = lambda0;
  const auto n_steps = static_cast<long>(std::ceil(T / step - 1e-9));
  for (long n = 0; n < n_steps; ++n) {
    const double t_end = (n + 1 == n_steps) ? T : (n + 1) * step;
    while (t < t_end) {
      double h = t_end - t;
      const double scale = std::abs(l);
      if (scale * h > 0.002) h = 0.002 / scale;
      const double k1 = rhs(t, l);
      const double k2 = rhs(t + 0.5 * h, l + 0.5 * h * k1);
      const double k3 = rhs(t + 0.5 * h, l + 0.5 * h * k2);
      const double k4 = rhs(t + h, l + h * k3);
      l += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = (t_end - t - h <= 0.0) ? t_end : t + h;
      if (!std::isfinite(l) || std::abs(l) > blowup_cap) {
        sol.escaped = true;
        sol.escape_time = t;
        return sol;
      }
    }
    sol.t.push_back(t);
    sol.lambda.push_back(l);
  }
  return sol;
}

std::string to_string(Convexity c) {
  switch (c) {
    case Convexity::strictly_convex: return "strictly_convex";
    case Convexity::convex: return "convex";
    case Convexity::not_convex: return "not_convex";
  }
  return "?";
}

ConvexityVerdict convexity_classify(const CollarMetric& c, const std::vector<int>& grid,
                                    double convex_tol) {
  const int n = c.boundary_dim();
  if (static_cast<int>(grid.size()) != n) {
    throw UsageError("convexity_classify: grid has wrong number of axes");
  }
  for (int g : grid) {
    if (g < 2) throw UsageError("convexity_classify: grid must have >= 2 points per axis");
  }
  ConvexityVerdict v;
  v.worst_eigenvalue = -std::numeric_limits<double>::infinity();
  for (const Vec& x : grid_points(c.boundary_box(), grid)) {
    const ShapeSpectrum sp = shape_operator(c, 0.0, x);
    const double top = sp.eigenvalues.maxCoeff();
    if (top > v.worst_eigenvalue) {
      v.worst_eigenvalue = top;
      v.worst_point = x;
    }
  }
  if (v.worst_eigenvalue < -convex_tol) {
    v.kind = Convexity::strictly_convex;
  } else if (v.worst_eigenvalue <= convex_tol) {
    v.kind = Convexity::convex;
  } else {
    v.kind = Convexity::not_convex;
  }
  return v;
}

double fermi_reflection_norm(const CollarMetric& c, double s0, int s_samples, int x_resolution) {
  if (!(s0 > 0.0) || !(-s0 > c.s_min()) || !(s0 < c.s_max())) {
    throw UsageError("fermi_reflection_norm: [-s0, s0] not inside the collar");
  }
  const int n = c.boundary_dim();
  const std::vector<Vec> xs = grid_points(c.boundary_box(), std::vector<int>(n, x_resolution));
  double worst = 1.0;
  for (int k = 1; k <= s_samples; ++k) {
    const double s = s0 * k / s_samples;
    for (const Vec& x : xs) {
      // |d rho (v)|^2 / |v|^2 maximized over tangential v.
      const Vec ev = sorted_generalized_eigs(c.slice(-s, x), c.slice(s, x));
      worst = std::max(worst, std::sqrt(ev.maxCoeff()));
    }
  }
  return worst;
}

}  // namespace collarext

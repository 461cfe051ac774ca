#include "collarext/geodesic.hpp"

#include "collarext/errors.hpp"

#include <algorithm>
#include <cmath>

namespace collarext {

double GeodesicPath::speed(const ChartMetric& g, std::size_t i) const {
  return std::sqrt(v[i].dot(g(x[i]) * v[i]));
}

namespace {

struct State {
  Vec x;
  Vec v;
};

// Returns false when x is too close to the chart boundary.
bool acceleration(const ChartMetric& g, const Vec& x, const Vec& v, Vec& out) {
  if (g.domain().clearance(x) < 2.0 * g.fd_step()) return false;
  const Christoffel G = christoffel(g, x);
  const int m = g.dim();
  out.setZero(m);
  for (int k = 0; k < m; ++k) {
    double a = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a += G(k, i, j) * v[i] * v[j];
    out[k] = -a;
  }
  return true;
}

}  // namespace

GeodesicPath shoot_geodesic(const ChartMetric& g, const Vec& p0, const Vec& v0, double T,
                            double step) {
  if (!(step > 0.0)) throw UsageError("shoot_geodesic: step must be positive");
  if (!(T > 0.0)) throw UsageError("shoot_geodesic: T must be positive");
  if (!g.domain().contains(p0)) throw UsageError("shoot_geodesic: start point outside chart");

  GeodesicPath path;
  path.t.push_back(0.0);
  path.x.push_back(p0);
  path.v.push_back(v0);
  Vec x = p0, v = v0;
  Vec a1, a2, a3, a4;
  double t = 0.0;
  const auto n_steps = static_cast<long>(std::ceil(T / step - 1e-9));
  for (long n = 0; n < n_steps; ++n) {
    const double h = std::min(step, T - t);
    bool ok = acceleration(g, x, v, a1);
    const Vec x2 = x + 0.5 * h * v, v2 = v + 0.5 * h * a1;
    ok = ok && acceleration(g, x2, v2, a2);
    const Vec x3 = x + 0.5 * h * v2, v3 = v + 0.5 * h * a2;
    ok = ok && acceleration(g, x3, v3, a3);
    const Vec x4 = x + h * v3, v4 = v + h * a3;
    ok = ok && acceleration(g, x4, v4, a4);
    if (!ok) {
      path.exited = true;
      path.exit_time = t;
      return path;
    }
    x += h / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4);
    v += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    t = (n + 1 == n_steps) ? T : t + h;
    path.t.push_back(t);
    path.x.push_back(x);
    path.v.push_back(v);
  }
  return path;
}

double speed_drift(const ChartMetric& g, const GeodesicPath& path) {
  const double s0 = path.speed(g, 0);
  double drift = 0.0;
  for (std::size_t i = 1; i < path.x.size(); ++i) {
    drift = std::max(drift, std::abs(path.speed(g, i) - s0));
  }
  return drift;
}

}  // namespace collarext

#include "collarext/errors.hpp"
#include "collarext/extensions.hpp"
#include "collarext/geodesic.hpp"
#include "collarext/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace collarext {

CollarMetric convexify_metric(const Mat& g_boundary, const CollarMetric& h, double k,
                              const BlendSpec& blend, double s_max) {
  if (!(k > 0.0)) throw UsageError("convexify_metric: k must be positive");
  if (g_boundary.rows() != h.boundary_dim() || g_boundary.cols() != h.boundary_dim()) {
    throw UsageError("convexify_metric: boundary metric has the wrong size");
  }
  if (h.s_min() > -blend.S || h.s_max() < blend.S) {
    throw DomainMismatchError("convexify_metric: collar does not cover (-S, S)");
  }
  if (!(s_max > 0.5 * blend.S)) throw UsageError("convexify_metric: s_max must exceed S/2");
  const double rk = std::sqrt(k);
  auto slice = [h, g_boundary, blend, rk](double s, const Vec& x) -> Mat {
    if (s <= 0.0) return h.slice(s, x);
    const double wh = blend.phi_h(s);
    const double wj = blend.phi_j(s);
    Mat out = (wj * std::sinh(rk * s) / rk) * g_boundary;
    if (wh != 0.0) out += wh * h.slice(s, x);
    return out;
  };
  return CollarMetric(h.s_min(), s_max, h.boundary_box(), slice);
}

namespace {

std::vector<double> verification_levels(double S, double top, int n) {
  std::vector<double> s;
  for (int i = 1; i <= n; ++i) s.push_back(top * i / n);
  // Extra density through the blend window, where the sign is decided.
  for (int i = 0; i <= 64; ++i) s.push_back(0.25 * S + 0.25 * S * i / 64.0);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

ConvexifyResult convexify_extension(const Mat& g_boundary, const CollarMetric& h,
                                    const BlendSpec& blend, const ConvexifyOptions& options) {
  const double S = blend.S;
  const double s_max = options.s_max > 0.0 ? options.s_max : 4.0 * S;
  const double top = options.verify_to > 0.0 ? options.verify_to : 3.0 * S;
  if (!(top < s_max)) throw UsageError("convexify_extension: verify_to must lie below s_max");
  if (!(options.k0 > 0.0)) throw UsageError("convexify_extension: k0 must be positive");

  const std::vector<Vec> xs = grid_points(
      h.boundary_box(), std::vector<int>(h.boundary_dim(), std::max(2, options.x_resolution)));
  for (const Vec& x : xs) {
    const double dev = (h.slice(0.0, x) - g_boundary).cwiseAbs().maxCoeff();
    if (dev > options.num_tol * std::max(1.0, g_boundary.cwiseAbs().maxCoeff())) {
      throw PreconditionError("convexify_extension: h_0 differs from the boundary metric", 0.0);
    }
  }
  const std::vector<double> levels = verification_levels(S, top, options.s_samples);

  ConvexifyResult result{convexify_metric(g_boundary, h, options.k0, blend, s_max), 0.0, 0.0, 0.0,
                         {}};
  double best = std::numeric_limits<double>::infinity();
  for (double k = options.k0; k <= options.k_max; k *= 2.0) {
    const CollarMetric ext = convexify_metric(g_boundary, h, k, blend, s_max);
    std::vector<double> worst(levels.size(), -std::numeric_limits<double>::infinity());
    parallel_for(levels.size(), [&](std::size_t i) {
      for (const Vec& x : xs) {
        const double top_ev = shape_operator(ext, levels[i], x).eigenvalues.maxCoeff();
        worst[i] = std::isnan(top_ev) ? std::numeric_limits<double>::infinity()
                                      : std::max(worst[i], top_ev);
      }
    });
    const auto it = std::max_element(worst.begin(), worst.end());
    const double w = *it;
    const bool ok = w <= -options.hess_tol;
    result.trace.push_back({"k", k, w, ok});
    best = std::min(best, w);
    if (ok) {
      result.metric = ext;
      result.k = k;
      result.worst_eigenvalue = w;
      result.worst_s = levels[static_cast<std::size_t>(it - worst.begin())];
      return result;
    }
  }
  std::ostringstream msg;
  msg << "convexify_extension: no k <= " << options.k_max
      << " makes every sampled principal value negative (best worst " << best << ")";
  throw SearchFailure(msg.str(), best);
}

GeodesicProbeReport convexity_geodesic_probe(const CollarMetric& extended, double S, int probes,
                                             std::uint64_t seed, double T, double step,
                                             double tol) {
  if (probes < 1) throw UsageError("convexity_geodesic_probe: probes must be >= 1");
  const ChartMetric g = extended.as_chart();
  const Box inner = extended.boundary_box().shrunk(0.25 * extended.boundary_box().shortest_side());
  const int n = extended.boundary_dim();

  std::vector<double> excursion(static_cast<std::size_t>(probes), 0.0);
  parallel_for(excursion.size(), [&](std::size_t i) {
    std::mt19937_64 rng(mix_seed(seed, i));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec p(n + 1);
    p[0] = -S / 2.0 + u(rng) * (3.0 * S / 8.0);
    for (int a = 0; a < n; ++a) p[a + 1] = inner.lower[a] + u(rng) * (inner.upper[a] - inner.lower[a]);
    const Vec v = random_plane(g(p), rng).first;
    const GeodesicPath path = shoot_geodesic(g, p, v, T, step);
    std::size_t last = 0;
    for (std::size_t j = 0; j < path.x.size(); ++j)
      if (path.x[j][0] < 0.0) last = j;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= last; ++j) worst = std::max(worst, path.x[j][0]);
    excursion[i] = worst;
  });

  GeodesicProbeReport rep;
  rep.probes = probes;
  rep.worst_excursion = -std::numeric_limits<double>::infinity();
  for (double e : excursion) {
    if (e <= tol) ++rep.stayed_inside;
    rep.worst_excursion = std::max(rep.worst_excursion, e);
  }
  return rep;
}

}  // namespace collarext

#include "collarext/errors.hpp"
#include "collarext/extensions.hpp"
#include "collarext/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace collarext {

std::function<double(double)> default_conformal_profile(double s_star) {
  if (!(s_star > 0.0)) throw UsageError("default_conformal_profile: s_star must be positive");
  return [s_star](double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(std::tan(std::numbers::pi * (s / s_star - 0.5)));
  };
}

namespace {

std::string at(double s) {
  std::ostringstream os;
  os << " at s = " << s;
  return os.str();
}

void check_profile(const std::function<double(double)>& phi, double s_min, double s_star,
                   int samples) {
  for (int i = 0; i <= samples; ++i) {
    const double s = s_min + (0.0 - s_min) * i / samples;
    if (s <= s_min) continue;
    if (phi(s) != 0.0) throw PreconditionError("conformal profile is nonzero" + at(s), s);
  }
  const double e = 1e-4 * s_star;
  for (int i = 1; i <= samples; ++i) {
    const double s = s_star * i / (samples + 1);
    const double a = phi(s - e), b = phi(s), c = phi(s + e);
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) break;
    const double round = 1e-12 * std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
    if (c - b < -round) throw PreconditionError("conformal profile decreases" + at(s), s);
    if (c - 2.0 * b + a < -round) throw PreconditionError("conformal profile is concave" + at(s), s);
  }
}

}  // namespace

NegativeSectExtension negative_sect_extension(const CollarMetric& h, double s_star,
                                              std::function<double(double)> profile,
                                              const NegativeSectOptions& options) {
  if (!(s_star > 0.0)) throw UsageError("negative_sect_extension: s_star must be positive");
  if (s_star > h.s_max() || h.s_min() >= 0.0) {
    throw DomainMismatchError("negative_sect_extension: collar must contain [0, s_star)");
  }
  if (!profile) profile = default_conformal_profile(s_star);
  check_profile(profile, h.s_min(), s_star, options.profile_samples);

  const ChartMetric base = h.restricted(h.s_min(), s_star).as_chart();
  ReportOptions ro;
  ro.resolution = std::vector<int>(base.dim(), std::max(3, options.precheck_resolution));
  ro.plane_samples = 4;
  ro.seed = options.seed;
  const CurvatureReport rep = grid_curvature_report(base, {BoundSpec::parse("sect < 0")}, ro);
  if (!rep.all_hold()) {
    const auto& v = rep.bound_verdicts.front();
    throw PreconditionError("collar metric is not negatively curved" + at(v.worst_point[0]),
                            v.worst_point[0]);
  }

  const auto fn = profile;
  ScalarField phi{base.domain(), [fn](const Vec& p) { return fn(p[0]); }};
  return {base, conformal_metric(base, phi), phi, profile, s_star};
}

NegativeSectVerification verify_negative_sect(const NegativeSectExtension& ext,
                                              const NegativeSectVerifyOptions& options) {
  NegativeSectVerification out;
  const ChartMetric& base = ext.base;
  const int m = base.dim();

  // Largest s with phi(s) <= ceiling; phi is non-decreasing.
  double lo = 0.0, hi = ext.s_star;
  if (ext.profile(hi * (1.0 - 1e-12)) <= options.phi_ceiling) {
    lo = hi;
  } else {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double v = ext.profile(mid);
      (std::isfinite(v) && v <= options.phi_ceiling ? lo : hi) = mid;
    }
  }
  Box box = base.domain().shrunk(4.0 * base.fd_step());
  box.upper[0] = std::min(box.upper[0], lo);
  out.s_upper = box.upper[0];

  const std::vector<int> res =
      options.resolution.empty() ? std::vector<int>(m, 33) : options.resolution;
  const std::vector<Vec> pts = grid_points(box, res);

  struct PointResult {
    double sect_max = -std::numeric_limits<double>::infinity();
    double disagreement = 0.0;
    std::size_t count = 0;
  };
  std::vector<PointResult> per(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const Vec& p = pts[i];
    const Riemann R = riemann(ext.metric, p);
    const Mat gp = ext.metric(p);
    std::vector<std::pair<Vec, Vec>> planes;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) planes.emplace_back(Vec::Unit(m, a), Vec::Unit(m, b));
    std::mt19937_64 rng(mix_seed(options.seed, i));
    const Mat hp = base(p);
    for (int k = 0; k < options.plane_samples; ++k) planes.push_back(random_plane(hp, rng));
    PointResult& r = per[i];
    for (const auto& [X, Y] : planes) {
      const double law = conformal_sectional(base, ext.phi, p, X, Y);
      const double direct = sectional(R, gp, X, Y);
      r.sect_max = std::isnan(law) ? std::numeric_limits<double>::infinity()
                                   : std::max(r.sect_max, law);
      const double gap = std::abs(law - direct);
      r.disagreement = std::isnan(gap) ? std::numeric_limits<double>::infinity()
                                       : std::max(r.disagreement, gap);
      ++r.count;
    }
  });

  out.sect_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < per.size(); ++i) {
    out.points.push_back({pts[i], per[i].sect_max, per[i].disagreement});
    out.samples += per[i].count;
    out.max_disagreement = std::max(out.max_disagreement, per[i].disagreement);
    if (per[i].sect_max > out.sect_max) {
      out.sect_max = per[i].sect_max;
      out.worst_point = pts[i];
    }
  }
  out.sect_negative = out.sect_max < 0.0;
  out.paths_agree = out.max_disagreement <= options.agreement_tol;
  out.radial = radial_length(ext.profile, ext.s_star, options.cutoffs);
  return out;
}

}  // namespace collarext

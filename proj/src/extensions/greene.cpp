#include "collarext/errors.hpp"
#include "collarext/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace collarext {

namespace {

double smoothstep5(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (u * (6.0 * u - 15.0) + 10.0);
}

double max_abs_sect(const CollarMetric& c, const GreeneOptions& o) {
  ReportOptions ro;
  ro.resolution.assign(static_cast<std::size_t>(c.dim()), std::max(3, o.x_resolution));
  ro.resolution[0] = std::max(3, o.s_resolution);
  ro.plane_samples = std::max(1, o.plane_samples);
  ro.seed = o.seed;
  const CurvatureReport rep =
      grid_curvature_report(c.as_chart(), {BoundSpec::parse("sect <= 1e300")}, ro);
  const double k = std::max(std::abs(rep.sect_min), std::abs(rep.sect_max));
  if (!std::isfinite(k)) throw InputError("greene_stretch: non-finite curvature sample");
  return k;
}

}  // namespace

GreeneResult greene_stretch(const WarpedProfile& f, const ShellPlan& shells,
                            const std::vector<double>& eps, const GreeneOptions& options) {
  shells.validate();
  const std::size_t n = shells.shells.size() < 2 ? 0 : shells.shells.size() - 1;
  if (n == 0) throw UsageError("greene_stretch: need at least two shell radii");
  if (eps.size() != n) throw UsageError("greene_stretch: one eps per shell required");
  for (double e : eps) {
    if (!(e > 0.0)) throw UsageError("greene_stretch: eps must be positive");
  }
  GreeneResult r;
  for (const auto& sh : shells.shells) r.old_boundaries.push_back(sh.t);
  if (r.old_boundaries.front() < f.s_min || r.old_boundaries.back() > f.s_max) {
    throw DomainMismatchError("greene_stretch: shells leave the profile's range");
  }

  const CollarMetric collar = f.to_collar();
  r.new_boundaries.push_back(r.old_boundaries.front());
  for (std::size_t i = 1; i <= n; ++i) {
    const double b0 = r.old_boundaries[i - 1], b1 = r.old_boundaries[i];
    const double K = max_abs_sect(collar.restricted(b0, b1), options);
    r.sampled_curvature.push_back(K);
    const double c = std::max(1.0, std::ceil(std::sqrt(K / eps[i - 1]) - 1e-6));
    r.factors.push_back(c);
    r.new_boundaries.push_back(r.new_boundaries.back() + c * (b1 - b0));
  }
  for (std::size_t j = 1; j < n; ++j) {
    const double shorter = std::min(r.new_boundaries[j] - r.new_boundaries[j - 1],
                                    r.new_boundaries[j + 1] - r.new_boundaries[j]);
    r.join_widths.push_back(options.join_fraction * shorter);
  }

  const auto fn = f.f;
  const auto B = r.new_boundaries;
  const auto b = r.old_boundaries;
  const auto c = r.factors;
  const auto w = r.join_widths;
  auto piece = [fn, B, b, c](std::size_t i, double sigma) {
    return c[i] * fn(b[i] + (sigma - B[i]) / c[i]);
  };
  auto F = [piece, B, w, n](double sigma) {
    std::size_t i = 0;
    while (i + 1 < n && sigma > B[i + 1]) ++i;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double centre = B[j + 1], half = 0.5 * w[j];
      if (std::abs(sigma - centre) < half) {
        const double chi = smoothstep5((sigma - (centre - half)) / w[j]);
        return std::exp((1.0 - chi) * std::log(piece(j, sigma)) +
                        chi * std::log(piece(j + 1, sigma)));
      }
    }
    return piece(i, sigma);
  };
  r.profile = WarpedProfile{F, f.base_metric, B.front(), B.back(), f.base_box};
  return r;
}

std::vector<GreeneShellCheck> verify_greene(const GreeneResult& r, const std::vector<double>& eps,
                                            const GreeneOptions& options, double slack) {
  const std::size_t n = r.factors.size();
  if (eps.size() != n) throw UsageError("verify_greene: one eps per shell required");
  const CollarMetric collar = r.profile.to_collar();
  std::vector<GreeneShellCheck> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = r.new_boundaries[i] + (i > 0 ? 0.5 * r.join_widths[i - 1] : 0.0);
    const double hi = r.new_boundaries[i + 1] - (i + 1 < n ? 0.5 * r.join_widths[i] : 0.0);
    GreeneShellCheck chk;
    chk.eps = eps[i];
    chk.max_abs_sect = max_abs_sect(collar.restricted(lo, hi), options);
    chk.holds = chk.max_abs_sect <= eps[i] + slack;
    out.push_back(chk);
  }
  return out;
}

}  // namespace collarext

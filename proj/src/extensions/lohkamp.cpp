#include "collarext/errors.hpp"
#include "collarext/extensions.hpp"
#include "collarext/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace collarext {

double lohkamp_cutoff(double r) {
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  if (r <= 1.0) return 0.0;
  if (r >= 2.0) return 1.0;
  const double a = psi(r - 1.0), b = psi(2.0 - r);
  return a / (a + b);
}

Vec LohkampBump::to_ball(const Vec& z) const {
  const double half = 0.5 * (chart.upper[0] - chart.lower[0]);
  return (z - chart.center()) * (6.0 / half);
}

double lohkamp_bump(const LohkampBump& b, const Vec& z) {
  const double r = b.to_ball(z).norm();
  if (r >= 5.0) return 0.0;
  return b.s_amp * std::exp(-b.d / (5.0 - r * lohkamp_cutoff(r)));
}

namespace {

enum class Target { ricci, scalar };

constexpr double kInf = std::numeric_limits<double>::infinity();

ScalarField bump_field(const ChartMetric& g, const LohkampBump& b) {
  return ScalarField{g.domain(), [b](const Vec& z) { return lohkamp_bump(b, z); }};
}

double quantity(const ChartMetric& g, const ScalarField& F, const Vec& p, Target t) {
  const ConformalRicci c = conformal_ricci(g, F, p);
  const double q = t == Target::ricci ? c.eigen_ratios.maxCoeff() : c.scalar;
  return std::isnan(q) ? kInf : q;
}

struct Samples {
  std::vector<Vec> annulus, transition;
  std::vector<double> base_annulus, base_transition;
};

std::vector<double> evaluate(const ChartMetric& g, const LohkampBump& b,
                             const std::vector<Vec>& pts, Target t) {
  const ScalarField F = bump_field(g, b);
  std::vector<double> q(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { q[i] = quantity(g, F, pts[i], t); });
  return q;
}

ChartMetric deformed(const ChartMetric& g, const LohkampBump& b) {
  return conformal_metric(g, bump_field(g, b));
}

struct Attempt {
  double worst = -kInf;       // max over the annulus
  bool decreased = true;      // below the base value at every annulus point
  bool transition_ok = true;  // not above the base value (+ tol) on the transition shell
};

Attempt assess(const ChartMetric& g, const LohkampBump& b, const Samples& s, Target t, double tol) {
  const std::vector<double> qa = evaluate(g, b, s.annulus, t);
  const std::vector<double> qt = evaluate(g, b, s.transition, t);
  Attempt a;
  for (std::size_t i = 0; i < qa.size(); ++i) {
    a.worst = std::max(a.worst, qa[i]);
    if (!(qa[i] < s.base_annulus[i])) a.decreased = false;
  }
  for (std::size_t i = 0; i < qt.size(); ++i) {
    if (!(qt[i] <= s.base_transition[i] + tol)) a.transition_ok = false;
  }
  return a;
}

Samples sample(const ChartMetric& g, const LohkampBump& b, const LohkampOptions& o, Target t) {
  Samples s;
  const std::vector<Vec> pts = grid_points(g.domain().shrunk(4.0 * g.fd_step()),
                                           std::vector<int>(g.dim(), std::max(3, o.resolution)));
  for (const Vec& p : pts) {
    const double r = b.to_ball(p).norm();
    if (r > o.annulus_inner && r < o.annulus_outer) {
      s.annulus.push_back(p);
    } else if (r >= o.annulus_outer && r < o.support_radius) {
      s.transition.push_back(p);
    }
  }
  if (s.annulus.empty()) throw UsageError("lohkamp_lower: no grid point in the annulus");
  LohkampBump none = b;
  none.s_amp = 0.0;
  s.base_annulus = evaluate(g, none, s.annulus, t);
  s.base_transition = evaluate(g, none, s.transition, t);
  return s;
}

LohkampResult lower(const ChartMetric& g, double C, const LohkampOptions& o, Target t) {
  const Box& box = g.domain();
  const double side = box.upper[0] - box.lower[0];
  for (int a = 1; a < box.dim(); ++a) {
    if (std::abs((box.upper[a] - box.lower[a]) - side) > 1e-12 * side) {
      throw UsageError("lohkamp_lower: chart box must be a cube");
    }
  }
  if (!(o.annulus_inner >= 2.0 && o.annulus_inner < o.annulus_outer &&
        o.annulus_outer < o.support_radius && o.support_radius <= 5.0)) {
    throw UsageError("lohkamp_lower: need 2 <= inner < outer < support <= 5");
  }
  LohkampBump bump{1.0, 1.0, box};
  const Samples s = sample(g, bump, o, t);
  const char* name = t == Target::ricci ? "Ricci ratio" : "scalar curvature";

  LohkampResult res{g, bump, true, false, -kInf, s.annulus.size(), {}, {}};
  for (double q : s.base_annulus) res.worst = std::max(res.worst, q);
  if (res.worst < C) {
    res.degenerate = true;
    res.bump.s_amp = 0.0;
    res.trace.push_back({"identity", 0.0, res.worst, true});
    return res;
  }

  double best = res.worst;
  Attempt a;
  bool found = false;
  for (double d = 1.0; d <= o.d_max; d *= 2.0) {
    bump.d = d;
    a = assess(g, bump, s, t, o.tol);
    const bool ok = a.decreased && a.transition_ok;
    res.trace.push_back({"d", d, a.worst, ok});
    best = std::min(best, a.worst);
    if (ok) {
      found = true;
      break;
    }
  }
  auto give_up = [&](const std::string& text) {
    res.succeeded = false;
    res.worst = best;
    res.bump = bump;
    res.message = text;
    return res;
  };
  if (!found) {
    std::ostringstream msg;
    msg << "lohkamp_lower: no d <= " << o.d_max << " lowers the " << name
        << " on the whole annulus (best worst " << best << ")";
    return give_up(msg.str());
  }
  for (double amp = 1.0; amp <= o.s_max; amp *= 2.0) {
    bump.s_amp = amp;
    if (amp > 1.0) a = assess(g, bump, s, t, o.tol);
    const bool ok = a.worst < C && a.transition_ok;
    res.trace.push_back({"s_amp", amp, a.worst, ok});
    best = std::min(best, a.worst);
    if (ok) {
      res.metric = deformed(g, bump);
      res.bump = bump;
      res.worst = a.worst;
      return res;
    }
  }
  std::ostringstream msg;
  msg << "lohkamp_lower: no s_amp <= " << o.s_max << " at d = " << bump.d << " pushes the "
      << name << " below " << C << " on the annulus (best worst " << best << ")";
  return give_up(msg.str());
}

LohkampResult checked(LohkampResult r) {
  if (!r.succeeded) throw SearchFailure(r.message, r.worst);
  return r;
}

}  // namespace

LohkampResult lohkamp_lower(const ChartMetric& g, double C, const LohkampOptions& options) {
  return checked(lower(g, C, options, Target::ricci));
}

LohkampResult lohkamp_lower_scalar(const ChartMetric& g, double C, const LohkampOptions& options) {
  return checked(lower(g, C, options, Target::scalar));
}

LohkampResult lohkamp_search(const ChartMetric& g, double C, bool scalar_target,
                             const LohkampOptions& options) {
  return lower(g, C, options, scalar_target ? Target::scalar : Target::ricci);
}

LohkampMonotonicity lohkamp_monotonicity(const ChartMetric& g, const LohkampResult& r,
                                         const LohkampOptions& options) {
  const Samples s = sample(g, r.bump, options, Target::ricci);
  LohkampBump doubled = r.bump;
  doubled.d *= 2.0;
  LohkampMonotonicity m;
  m.worst_found = assess(g, r.bump, s, Target::ricci, options.tol).worst;
  m.worst_doubled = assess(g, doubled, s, Target::ricci, options.tol).worst;
  m.holds = m.worst_doubled <= m.worst_found + options.tol;
  return m;
}

}  // namespace collarext

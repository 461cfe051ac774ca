#include <doctest.h>

#include "collarext/curvature_report.hpp"
#include "collarext/errors.hpp"
#include "collarext/extensions.hpp"
#include "collarext/models.hpp"

#include <cmath>
#include <random>

using namespace collarext;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x[i++] = a;
  return x;
}

double op_norm(const Mat& a) {
  return Eigen::SelfAdjointEigenSolver<Mat>(a).eigenvalues().cwiseAbs().maxCoeff();
}

WarpedProfile warp(std::function<double(double)> f, double s_min, double s_max) {
  WarpedProfile w;
  w.f = std::move(f);
  w.base_metric = Mat::Identity(1, 1);
  w.s_min = s_min;
  w.s_max = s_max;
  w.base_box = Box(vec({-1.0}), vec({1.0}));
  return w;
}

ShellPlan plan_of(std::initializer_list<std::pair<double, double>> tq) {
  ShellPlan p;
  for (const auto& [t, q] : tq) p.shells.push_back({t, q});
  return p;
}

// Flat disk of radius 1: collar f = 1 + s over the unit circle.
struct FlatDisk {
  CollarMetric h = models::flat_annulus(1.0).to_collar();
  Mat g_bd = Mat::Identity(1, 1);
  double S = 0.5;
};

}  // namespace

TEST_SUITE("extensions") {

TEST_CASE("quintic blend: supports, partition and monotonicity") {
  for (double S : {0.2, 0.5, 3.0}) {
    const BlendSpec b = BlendSpec::quintic(S);
    const BlendCheck c = check_blend(b);
    CHECK(c.ok());
    CHECK(c.partition_error <= 1e-12);
    CHECK(c.inner_error == 0.0);
    CHECK(c.outer_error == 0.0);
    CHECK(c.max_slope <= 0.0);
    CHECK(b.phi_h(S / 8) == 1.0);
    CHECK(b.phi_h(S / 4) == 1.0);
    CHECK(b.phi_h(S / 2) == 0.0);
    CHECK(b.phi_h(10 * S) == 0.0);
  }
}

TEST_CASE("shell plan validation") {
  CHECK_NOTHROW(ShellPlan::geometric(5, 0.5).validate());
  CHECK_THROWS_AS(plan_of({{1.0, 0.5}, {1.0, 0.5}}).validate(), UsageError);
  CHECK_THROWS_AS(plan_of({{1.0, 0.5}, {2.0, 0.0}}).validate(), UsageError);
  CHECK_THROWS_AS(plan_of({{2.0, 0.5}, {1.0, 0.5}}).validate(), UsageError);
}

TEST_CASE("convexify: identity below S/4 and continuity at the joins") {
  const FlatDisk d;
  const BlendSpec blend = BlendSpec::quintic(d.S);
  const CollarMetric ext = convexify_metric(d.g_bd, d.h, 64.0, blend, 4 * d.S);
  for (double x : {-2.0, 0.0, 1.3}) {
    const Vec p = vec({x});
    CHECK((ext.slice(d.S / 8, p) - d.h.slice(d.S / 8, p)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ext.slice(-0.2, p) - d.h.slice(-0.2, p)).cwiseAbs().maxCoeff() == 0.0);
    for (double joint : {d.S / 4, d.S / 2}) {
      CHECK(op_norm(ext.slice(joint + 1e-6, p) - ext.slice(joint - 1e-6, p)) <= 1e-4);
    }
  }
}

TEST_CASE("convexify: flat disk search, principal values and geodesic probe") {
  const FlatDisk d;
  const BlendSpec blend = BlendSpec::quintic(d.S);
  const ConvexifyResult r = convexify_extension(d.g_bd, d.h, blend);
  CHECK(std::isfinite(r.k));
  CHECK(r.k >= 1.0);
  CHECK(r.worst_eigenvalue <= -1e-8);
  REQUIRE_FALSE(r.trace.empty());
  CHECK(r.trace.back().accepted);
  for (std::size_t i = 0; i + 1 < r.trace.size(); ++i) CHECK_FALSE(r.trace[i].accepted);

  const double rk = std::sqrt(r.k);
  for (int i = 0; i <= 40; ++i) {
    const double s = d.S / 2 + (3 * d.S - d.S / 2) * i / 40.0;
    const double lam = shape_operator(r.metric, s, vec({0.3})).eigenvalues.maxCoeff();
    CHECK(lam < 0.0);
    // pure first-power sinh warp beyond S/2; central differences of a
    // profile growing like e^{sqrt(k) s} carry a relative error ~ (sqrt(k) h)^2 / 6
    CHECK(lam == doctest::Approx(-0.5 * rk / std::tanh(rk * s)).epsilon(1e-4));
  }
  for (int i = 1; i <= 40; ++i) {
    const double s = d.S / 2 * i / 40.0;
    CHECK(shape_operator(r.metric, s, vec({-0.7})).eigenvalues.maxCoeff() < 0.0);
  }

  const GeodesicProbeReport probe = convexity_geodesic_probe(r.metric, d.S, 20, 1);
  CHECK(probe.probes == 20);
  CHECK(probe.stayed_inside == 20);
}

TEST_CASE("convexify: precondition and cap") {
  const FlatDisk d;
  const BlendSpec blend = BlendSpec::quintic(d.S);
  CHECK_THROWS_AS(convexify_extension(2.0 * d.g_bd, d.h, blend), PreconditionError);
  ConvexifyOptions o;
  o.k_max = 4.0;
  CHECK_THROWS_AS(convexify_extension(d.g_bd, d.h, blend, o), SearchFailure);
}

TEST_CASE("negative sect: unchanged on s <= 0, negative after blow-up") {
  const CollarMetric h = models::hyperbolic_collar().to_collar();
  const NegativeSectExtension ext = negative_sect_extension(h, 1.0);
  for (double s : {-0.4, -0.1, 0.0}) {
    const Vec p = vec({s, 0.2});
    CHECK((ext.metric(p) - ext.base(p)).cwiseAbs().maxCoeff() == 0.0);
  }
  NegativeSectVerifyOptions o;
  o.resolution = {41, 25};
  o.plane_samples = 2;
  const NegativeSectVerification v = verify_negative_sect(ext, o);
  CHECK(v.samples >= 1000);
  CHECK(v.sect_negative);
  CHECK(v.sect_max < 0.0);
  CHECK(v.paths_agree);
  CHECK(v.max_disagreement < 1e-4);
  for (const auto& pt : v.points) CHECK(pt.disagreement < 1e-4);
  CHECK(v.radial.verdict == Verdict::diverges);
  CHECK(v.radial.evidence.back() > 1e6);
}

TEST_CASE("negative sect: preconditions") {
  const CollarMetric hyp = models::hyperbolic_collar().to_collar();
  const CollarMetric flat = models::flat_annulus(1.0).to_collar();
  CHECK_THROWS_AS(negative_sect_extension(flat, 0.2), PreconditionError);
  CHECK_THROWS_AS(negative_sect_extension(hyp, 1.0, [](double s) { return s <= 0.0 ? 0.0 : -s; }),
                  PreconditionError);
  CHECK_THROWS_AS(negative_sect_extension(hyp, 1.0, [](double s) { return 0.1 + s * s; }),
                  PreconditionError);
  CHECK_THROWS_AS(negative_sect_extension(
                      hyp, 1.0, [](double s) { return s <= 0.0 ? 0.0 : std::sqrt(s); }),
                  PreconditionError);
}

TEST_CASE("shell completion closed forms") {
  const ShellPlan halves = ShellPlan::geometric(30, 0.5);
  const std::vector<double> c = shell_completion(halves);
  const std::vector<double> len = scaled_crossing_lengths(halves, c);
  for (std::size_t j = 0; j < c.size(); ++j) {
    CHECK(c[j] == std::ldexp(1.0, static_cast<int>(j) + 1));
    CHECK(len[j] == 1.0);
  }
  CHECK(shell_series(halves, c).verdict == Verdict::diverges);

  const std::vector<double> ones = shell_completion(plan_of({{1.0, 1.0}, {2.0, 3.0}, {3.0, 10.0}}));
  for (double v : ones) CHECK(v == 1.0);

  const std::vector<double> mixed = shell_completion(plan_of({{1.0, 0.5}, {2.0, 2.0}, {3.0, 0.1}}));
  CHECK(mixed[0] == 2.0);
  CHECK(mixed[1] == 1.0);
  CHECK(mixed[2] >= 10.0);
  CHECK(mixed[2] == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("shell completion: factor >= 1 everywhere, terms >= 1 for q <= 1") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> q(1e-6, 1.0), dt(0.01, 2.0);
  for (int draw = 0; draw < 50; ++draw) {
    ShellPlan p;
    double t = 0.0;
    for (int j = 0; j < 25; ++j) p.shells.push_back({t += dt(rng), q(rng)});
    const std::vector<double> c = shell_completion(p);
    for (double v : scaled_crossing_lengths(p, c)) CHECK(v >= 1.0);
    const DivergenceVerdict s = shell_series(p, c);
    for (std::size_t k = 0; k < s.evidence.size(); ++k)
      CHECK(s.evidence[k] - (k ? s.evidence[k - 1] : 0.0) >= 1.0);
    for (double x = -1.0; x < t + 1.0; x += 0.05) CHECK(shell_factor_at(p, c, x) >= 1.0);
  }
  const ShellPlan p = plan_of({{1.0, 0.5}, {2.0, 2.0}, {3.0, 0.1}});
  const std::vector<double> c = shell_completion(p);
  CHECK(shell_factor_at(p, c, 0.0) == c[0]);
  CHECK(shell_factor_at(p, c, 1.0) == c[0]);
  CHECK(shell_factor_at(p, c, 1.5) == c[1]);
  CHECK(shell_factor_at(p, c, 2.5) == c[2]);
  CHECK(shell_factor_at(p, c, 3.5) == 1.0);
}

TEST_CASE("greene: curvature 4 with eps 1 gives c = 2") {
  const WarpedProfile w = warp([](double s) { return std::cosh(2.0 * s); }, 0.0, 1.0);
  const std::vector<double> eps{1.0};
  const GreeneResult r = greene_stretch(w, plan_of({{0.1, 1.0}, {0.9, 1.0}}), eps);
  REQUIRE(r.factors.size() == 1);
  CHECK(r.sampled_curvature[0] == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(r.factors[0] == 2.0);
  const auto check = verify_greene(r, eps);
  CHECK(check[0].holds);
  CHECK(check[0].max_abs_sect <= 1.0 + 1e-5);
}

TEST_CASE("greene: flat profile unchanged") {
  const WarpedProfile w = models::flat_annulus(1.0);
  const ShellPlan p = plan_of({{-0.4, 1.0}, {0.0, 1.0}, {0.4, 1.0}});
  const GreeneResult r = greene_stretch(w, p, {0.1, 0.1});
  for (double c : r.factors) CHECK(c == 1.0);
  for (std::size_t i = 0; i < r.new_boundaries.size(); ++i)
    CHECK(r.new_boundaries[i] == r.old_boundaries[i]);
  for (double s : {-0.3, 0.1, 0.35}) CHECK(r.profile.f(s) == doctest::Approx(w.f(s)).epsilon(1e-12));
}

TEST_CASE("greene: cosh on three shells meets each bound and rescales distances") {
  const WarpedProfile w = warp([](double s) { return std::cosh(s); }, 0.0, 3.0);
  const ShellPlan p = plan_of({{0.2, 1.0}, {1.0, 1.0}, {1.8, 1.0}, {2.6, 1.0}});
  const std::vector<double> eps{1.0, 0.1, 0.01};
  const GreeneResult r = greene_stretch(w, p, eps);
  CHECK(r.factors[0] == 1.0);
  CHECK(r.factors[1] == 4.0);
  CHECK(r.factors[2] == 10.0);
  for (const auto& c : verify_greene(r, eps)) CHECK(c.holds);
  for (std::size_t i = 1; i < r.new_boundaries.size(); ++i) {
    const double ratio = (r.new_boundaries[i] - r.new_boundaries[i - 1]) /
                         (r.old_boundaries[i] - r.old_boundaries[i - 1]);
    CHECK(std::abs(ratio - r.factors[i - 1]) <= 1e-8);
  }
  // arc length of the stretched radial segment between boundaries
  const ChartMetric g = r.profile.to_collar().as_chart();
  for (std::size_t i = 1; i < r.new_boundaries.size(); ++i) {
    const double a = r.new_boundaries[i - 1], b = r.new_boundaries[i];
    const double L = curve_length(
        g, [](double t) { return vec({t, 0.0}); }, [](double) { return vec({1.0, 0.0}); }, a, b);
    CHECK(std::abs(L / (r.old_boundaries[i] - r.old_boundaries[i - 1]) - r.factors[i - 1]) <= 1e-8);
  }
}

TEST_CASE("lohkamp bump closed forms") {
  const LohkampBump b{5.0, 1.0, Box::cube(3, 6.0)};
  CHECK(lohkamp_bump(b, vec({6.0, 0.0, 0.0})) == 0.0);
  CHECK(lohkamp_bump(b, vec({0.0, 5.0, 0.0})) == 0.0);
  CHECK(lohkamp_bump(b, vec({0.0, 0.0, 0.0})) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  double prev = INFINITY;
  for (int i = 0; i <= 300; ++i) {
    const double r = 2.0 + 3.0 * i / 301.0;
    const double v = lohkamp_bump(b, vec({r, 0.0, 0.0}));
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(lohkamp_cutoff(1.0) == 0.0);
  CHECK(lohkamp_cutoff(2.0) == 1.0);
  CHECK(lohkamp_cutoff(1.5) == doctest::Approx(0.5));
}

TEST_CASE("lohkamp: degenerate success when the target already holds") {
  const ChartMetric g = models::flat_box(3, 6.0);
  LohkampOptions o;
  o.resolution = 9;
  const LohkampResult r = lohkamp_lower(g, 1.0, o);
  CHECK(r.succeeded);
  CHECK(r.degenerate);
  CHECK(r.bump.s_amp == 0.0);
  const LohkampResult s = lohkamp_lower_scalar(g, 1.0, o);
  CHECK(s.succeeded);
  CHECK(s.degenerate);
}

TEST_CASE("lohkamp: flat B_6 at C = -0.1 is out of reach of the doubling search") {
  // The annulus must be lowered where the bump is e^{-d/(5-r)}: at d = 32
  // the outer annulus sees F ~ 1e-14, so the ratios stay near zero while any
  // amplitude large enough there drives e^{-2F} to zero further in.
  LohkampOptions o;
  o.resolution = 17;
  const LohkampResult r = lohkamp_search(models::flat_box(3, 6.0), -0.1, false, o);
  CHECK_FALSE(r.succeeded);
  CHECK(r.worst < 0.0);
  CHECK(r.worst > -0.1);
  CHECK_THROWS_AS(lohkamp_lower(models::flat_box(3, 6.0), -0.1, o), SearchFailure);
}

TEST_CASE("lohkamp: a small flat ball reaches C = -0.1") {
  // Same construction on a chart of half-width 0.03: ratios scale by 1/lambda^2.
  const ChartMetric g = models::flat_box(3, 0.03);
  LohkampOptions o;
  o.resolution = 17;
  const LohkampResult r = lohkamp_lower(g, -0.1, o);
  REQUIRE(r.succeeded);
  CHECK_FALSE(r.degenerate);
  CHECK(r.worst < -0.1);

  // the deformed metric equals g outside the support
  for (const Vec& p : {vec({0.029, 0.0, 0.0}), vec({0.02, 0.02, 0.02})}) {
    CHECK((r.metric(p) - g(p)).cwiseAbs().maxCoeff() == 0.0);
  }

  // direct curvature of the deformed metric on the annulus
  ReportOptions ro;
  ro.resolution = {17, 17, 17};
  ro.plane_samples = 1;
  const LohkampBump b = r.bump;
  ro.include = [b](const Vec& z) {
    const double rad = b.to_ball(z).norm();
    return rad > 2.0 && rad < 4.0;
  };
  BoundSpec bound = BoundSpec::parse("Ric < 0");
  bound.value = -0.1;
  const CurvatureReport rep = grid_curvature_report(r.metric, {bound}, ro);
  CHECK(rep.point_count > 0);
  CHECK(rep.all_hold());

  // scalar of the law equals the trace of its Ricci
  const ScalarField F{g.domain(), [b](const Vec& z) { return lohkamp_bump(b, z); }};
  for (const Vec& p : {vec({0.01, 0.0, 0.0}), vec({0.0, -0.008, 0.006})}) {
    const ConformalRicci c = conformal_ricci(g, F, p);
    CHECK(std::abs(c.scalar - (r.metric(p).inverse() * c.ric).trace()) <= 1e-6 * std::max(1.0, std::abs(c.scalar)));
  }
}

TEST_CASE("lohkamp: doubling d past the found value weakens the patch") {
  // Counterexample to monotonicity in d: the bump shrinks like e^{-d/(5-r)},
  // so at fixed amplitude the annulus ratios move back towards zero.
  const ChartMetric g = models::flat_box(3, 0.03);
  LohkampOptions o;
  o.resolution = 17;
  const LohkampResult r = lohkamp_lower(g, -0.1, o);
  REQUIRE(r.succeeded);
  const LohkampMonotonicity m = lohkamp_monotonicity(g, r, o);
  CHECK(m.worst_found < -0.1);
  CHECK(m.worst_doubled > m.worst_found);
  CHECK_FALSE(m.holds);
}

TEST_CASE("lohkamp: scalar target on a small ball") {
  const ChartMetric g = models::flat_box(3, 1.5);
  LohkampOptions o;
  o.resolution = 17;
  const LohkampResult r = lohkamp_lower_scalar(g, -0.1, o);
  REQUIRE(r.succeeded);
  CHECK(r.worst < -0.1);
  ReportOptions ro;
  ro.resolution = {17, 17, 17};
  ro.plane_samples = 1;
  const LohkampBump b = r.bump;
  ro.include = [b](const Vec& z) {
    const double rad = b.to_ball(z).norm();
    return rad > 2.0 && rad < 4.0;
  };
  BoundSpec bound = BoundSpec::parse("Scal < 0");
  bound.value = -0.1;
  CHECK(grid_curvature_report(r.metric, {bound}, ro).all_hold());
}

}  // TEST_SUITE

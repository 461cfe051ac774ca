#include <doctest.h>

#include "collarext/curvature_report.hpp"
#include "collarext/errors.hpp"
#include "collarext/geodesic.hpp"
#include "collarext/models.hpp"
#include "collarext/parallel.hpp"
#include "collarext/tensor_core.hpp"
#include "oracles.hpp"

#include <cmath>
#include <algorithm>
#include <random>

using namespace collarext;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x[i++] = a;
  return x;
}

Vec random_point(const Box& box, std::mt19937_64& rng, double margin = 0.1) {
  Vec p(box.dim());
  for (int a = 0; a < box.dim(); ++a) {
    const double lo = box.lower[a] + margin * (box.upper[a] - box.lower[a]);
    const double hi = box.upper[a] - margin * (box.upper[a] - box.lower[a]);
    p[a] = std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  return p;
}

// Polar chart of the plane, diag(1, r^2).
ChartMetric polar() {
  return ChartMetric(Box(vec({1.0, -1.0}), vec({3.0, 1.0})), [](const Vec& p) {
    Mat g = Mat::Identity(2, 2);
    g(1, 1) = p[0] * p[0];
    return g;
  });
}

double bianchi_residual(const Riemann& R) {
  const int m = R.dim();
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          worst = std::max(worst, std::abs(R(i, j, k, l) + R(j, l, k, i) + R(l, i, k, j)));
  return worst;
}

double pair_residual(const Riemann& R) {
  const int m = R.dim();
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          worst = std::max(worst, std::abs(R(i, j, k, l) + R(j, i, k, l)));
          worst = std::max(worst, std::abs(R(i, j, k, l) + R(i, j, l, k)));
          worst = std::max(worst, std::abs(R(i, j, k, l) - R(k, l, i, j)));
        }
  return worst;
}

}  // namespace

TEST_SUITE("tensor_core") {

TEST_CASE("christoffel of the flat metric vanishes") {
  const ChartMetric g = models::flat_box(3);
  CHECK(christoffel(g, vec({0.1, -0.2, 0.3})).max_abs() == doctest::Approx(0.0));
}

TEST_CASE("christoffel of the polar metric") {
  const Christoffel G = christoffel(polar(), vec({2.0, 0.0}));
  CHECK(G(0, 1, 1) == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(G(1, 0, 1) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(G(1, 1, 0) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(std::abs(G(0, 0, 0)) < 1e-9);
  CHECK(std::abs(G(1, 1, 1)) < 1e-9);
  CHECK(std::abs(G(0, 0, 1)) < 1e-9);
}

TEST_CASE("christoffel matches the halved-step oracle on random metrics") {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ChartMetric g = models::random_analytic(3, seed);
    const Vec p = random_point(g.domain(), rng);
    const Christoffel G = christoffel(g, p);
    const auto ref = oracle::christoffel_richardson(g, p, 2e-3);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          CHECK(std::abs(G(k, i, j) - ref[(k * 3 + i) * 3 + j]) < 1e-6);
          CHECK(G(k, i, j) == G(k, j, i));
        }
  }
}

TEST_CASE("christoffel errors: clearance and definiteness") {
  const ChartMetric g = models::flat_box(2);
  CHECK_THROWS_AS(christoffel(g, vec({1.0 - 1e-5, 0.0})), ClearanceError);
  const ChartMetric bad(Box::cube(2, 1.0), [](const Vec& p) {
    Mat g = Mat::Identity(2, 2);
    g(0, 0) = p[0];
    return g;
  });
  CHECK_THROWS_AS(christoffel(bad, vec({-0.5, 0.0})), DefinitenessError);
}

TEST_CASE("riemann: flat zero, sphere component, symmetries") {
  CHECK(riemann(models::flat_box(3), vec({0.0, 0.0, 0.0})).symmetry_residual() == 0.0);
  const Riemann Z = riemann(models::flat_box(3), vec({0.1, 0.2, 0.3}));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(Z(i, j, i, j)) < 1e-12);

  for (double r : {1.0, 2.0}) {
    const double theta = 1.1;
    const Riemann R = riemann(models::sphere(r), vec({theta, 0.3}));
    CHECK(R(0, 1, 0, 1) == doctest::Approx(r * r * std::sin(theta) * std::sin(theta)).epsilon(1e-5));
  }
}

TEST_CASE("riemann symmetry and first Bianchi residuals on 100 random draws") {
  std::mt19937_64 rng(3);
  double worst_pair = 0.0, worst_bianchi = 0.0;
  for (std::uint64_t draw = 0; draw < 100; ++draw) {
    const int m = 2 + static_cast<int>(draw % 3);
    const ChartMetric g = models::random_analytic(m, 1000 + draw);
    const Riemann R = riemann(g, random_point(g.domain(), rng));
    worst_pair = std::max(worst_pair, pair_residual(R));
    worst_bianchi = std::max(worst_bianchi, bianchi_residual(R));
  }
  CHECK(worst_pair <= 1e-5);
  CHECK(worst_bianchi <= 1e-5);
}

TEST_CASE("sectional closed forms") {
  std::mt19937_64 rng(5);
  const ChartMetric s2 = models::sphere(2.0);
  const ChartMetric hyp = models::warped_sinh().to_collar().as_chart();
  for (int i = 0; i < 20; ++i) {
    const Vec p = random_point(s2.domain(), rng);
    const auto [X, Y] = random_plane(s2(p), rng);
    CHECK(std::abs(sectional(s2, p, X, Y) - 0.25) < 1e-5);
    const Vec q = random_point(hyp.domain(), rng);
    const auto [U, V] = random_plane(hyp(q), rng);
    CHECK(std::abs(sectional(hyp, q, U, V) + 1.0) < 1e-5);
  }
}

TEST_CASE("sectional is a function of the plane only") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int draw = 0; draw < 30; ++draw) {
    const ChartMetric g = models::random_analytic(3, 50 + draw);
    const Vec p = random_point(g.domain(), rng);
    const auto [X, Y] = random_plane(g(p), rng);
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (std::abs(a * d - b * c) < 0.1) d += 1.0;
    const Riemann R = riemann(g, p);
    const double k0 = sectional(R, g(p), X, Y);
    const double k1 = sectional(R, g(p), a * X + b * Y, c * X + d * Y);
    CHECK(std::abs(k1 - k0) <= 1e-8 * std::max(1.0, std::abs(k0)));
  }
  const ChartMetric g = models::flat_box(2);
  CHECK_THROWS_AS(sectional(g, vec({0.0, 0.0}), vec({1.0, 0.0}), vec({2.0, 0.0})),
                  DegeneratePlaneError);
}

TEST_CASE("ricci and scalar closed forms") {
  const Mat z = ricci(models::flat_box(3), vec({0.2, 0.1, 0.0}));
  CHECK(z.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(scalar(models::flat_box(3), vec({0.2, 0.1, 0.0}))) < 1e-10);

  const ChartMetric s2 = models::sphere(1.0);
  const Vec p = vec({1.0, 0.4});
  const Vec ratios = ricci_eigen_ratios(ricci(s2, p), s2(p));
  CHECK(ratios[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(ratios[1] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(scalar(s2, p) == doctest::Approx(2.0).epsilon(1e-5));

  const ChartMetric sl = models::sphere_cross_line();
  const Vec q = vec({1.2, 0.1, 0.3});
  const Vec e = ricci_eigen_ratios(ricci(sl, q), sl(q));
  CHECK(std::abs(e[0]) < 1e-5);
  CHECK(std::abs(e[1] - 1.0) < 1e-5);
  CHECK(std::abs(e[2] - 1.0) < 1e-5);
}

TEST_CASE("ricci is the trace of riemann and scalar the trace of ricci") {
  const ChartMetric g = models::random_analytic(3, 77);
  const Vec p = vec({0.1, -0.3, 0.2});
  const Riemann R = riemann(g, p);
  const Mat gi = g(p).inverse();
  Mat ric = Mat::Zero(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) ric(j, l) += gi(i, k) * R(i, j, k, l);
  CHECK((ric - ricci(g, p)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(std::abs((gi * ric).trace() - scalar(g, p)) < 1e-9);
}

TEST_CASE("conformal_metric: identity, constants, additivity, domain check") {
  const ChartMetric h = models::random_analytic(2, 4);
  const Vec p = vec({0.3, -0.4});
  const ScalarField zero{h.domain(), [](const Vec&) { return 0.0; }};
  CHECK((conformal_metric(h, zero)(p) - h(p)).cwiseAbs().maxCoeff() == 0.0);

  const ScalarField c{h.domain(), [](const Vec&) { return 0.7; }};
  const ChartMetric flat = conformal_metric(models::flat_box(2), c);
  CHECK((flat(p) - std::exp(1.4) * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  const ScalarField a = models::random_conformal_factor(h.domain(), 1);
  const ScalarField b = models::random_conformal_factor(h.domain(), 2);
  const ScalarField ab{h.domain(), [a, b](const Vec& x) { return a(x) + b(x); }};
  const Mat twice = conformal_metric(conformal_metric(h, a), b)(p);
  const Mat once = conformal_metric(h, ab)(p);
  CHECK((twice - once).cwiseAbs().maxCoeff() <= 1e-13 * once.cwiseAbs().maxCoeff());

  const ScalarField elsewhere{Box::cube(2, 2.0), [](const Vec&) { return 0.0; }};
  CHECK_THROWS_AS(conformal_metric(h, elsewhere), DomainMismatchError);
}

TEST_CASE("conformal_sectional: identity and constant factors") {
  std::mt19937_64 rng(21);
  const ChartMetric h = models::random_analytic(3, 8);
  const ScalarField zero{h.domain(), [](const Vec&) { return 0.0; }};
  for (int i = 0; i < 10; ++i) {
    const Vec p = random_point(h.domain(), rng);
    const auto [X, Y] = random_plane(h(p), rng);
    const double k = sectional(h, p, X, Y);
    CHECK(std::abs(conformal_sectional(h, zero, p, X, Y) - k) <= 1e-12 * std::max(1.0, std::abs(k)));
    const double cst = 0.1 * i - 0.4;
    const ScalarField c{h.domain(), [cst](const Vec&) { return cst; }};
    const double kc = conformal_sectional(h, c, p, X, Y);
    CHECK(std::abs(kc - std::exp(-2.0 * cst) * k) <= 1e-10 * std::max(1.0, std::abs(kc)));
  }
}

TEST_CASE("conformal_sectional agrees with direct curvature of e^{2 phi} h") {
  // phi(s, x) = s on a flat collar
  const ChartMetric flat = models::flat_box(2);
  const ScalarField s{flat.domain(), [](const Vec& x) { return x[0]; }};
  const Vec p = vec({0.2, 0.1});
  const double law = conformal_sectional(flat, s, p, vec({1.0, 0.0}), vec({0.0, 1.0}));
  const double direct = sectional(conformal_metric(flat, s), p, vec({1.0, 0.0}), vec({0.0, 1.0}));
  CHECK(std::abs(law - direct) < 1e-4);

  std::mt19937_64 rng(33);
  double worst = 0.0;
  for (std::uint64_t draw = 0; draw < 50; ++draw) {
    const int m = 2 + static_cast<int>(draw % 2);
    const ChartMetric h = models::random_analytic(m, 200 + draw);
    const ScalarField phi = models::random_conformal_factor(h.domain(), 300 + draw);
    const Vec q = random_point(h.domain(), rng);
    const auto [X, Y] = random_plane(h(q), rng);
    const double a = conformal_sectional(h, phi, q, X, Y);
    const double b = sectional(conformal_metric(h, phi), q, X, Y);
    worst = std::max(worst, std::abs(a - b));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("conformal_ricci matches the direct Ricci of e^{2 phi} h") {
  std::mt19937_64 rng(44);
  for (std::uint64_t draw = 0; draw < 10; ++draw) {
    const ChartMetric h = models::random_analytic(3, 400 + draw);
    const ScalarField phi = models::random_conformal_factor(h.domain(), 500 + draw);
    const Vec q = random_point(h.domain(), rng);
    const ChartMetric g = conformal_metric(h, phi);
    const ConformalRicci c = conformal_ricci(h, phi, q);
    CHECK((c.ric - ricci(g, q)).cwiseAbs().maxCoeff() < 1e-4);
    CHECK(std::abs(c.scalar - scalar(g, q)) < 1e-4);
  }
}

TEST_CASE("shoot_geodesic: straight lines in flat space") {
  const ChartMetric g = models::flat_box(2, 5.0);
  const Vec p0 = vec({-1.0, 0.5}), v0 = vec({0.6, -0.3});
  const GeodesicPath path = shoot_geodesic(g, p0, v0, 3.0, 1e-2);
  CHECK_FALSE(path.exited);
  for (std::size_t i = 0; i < path.t.size(); ++i) {
    CHECK((path.x[i] - (p0 + path.t[i] * v0)).norm() < 1e-8);
  }
  CHECK_THROWS_AS(shoot_geodesic(g, p0, v0, 1.0, 0.0), UsageError);
  CHECK_THROWS_AS(shoot_geodesic(g, p0, v0, 0.0, 1e-3), UsageError);
}

TEST_CASE("shoot_geodesic: the equator closes after 2 pi") {
  // polar chart with an angular range long enough to hold one full turn
  const ChartMetric s2(Box(vec({0.2, -1.0}), vec({M_PI - 0.2, 7.0})), [](const Vec& p) {
    Mat g = Mat::Identity(2, 2);
    g(1, 1) = std::sin(p[0]) * std::sin(p[0]);
    return g;
  });
  const Vec p0 = vec({M_PI / 2, -0.5});
  const GeodesicPath path = shoot_geodesic(s2, p0, vec({0.0, 1.0}), 2.0 * M_PI, 1e-3);
  REQUIRE_FALSE(path.exited);
  CHECK(std::abs(path.x.back()[0] - p0[0]) < 1e-3);
  CHECK(std::abs(path.x.back()[1] - 2.0 * M_PI - p0[1]) < 1e-3);
}

TEST_CASE("shoot_geodesic: speed conservation on random metrics") {
  std::mt19937_64 rng(55);
  for (std::uint64_t draw = 0; draw < 5; ++draw) {
    const ChartMetric g = models::random_analytic(2, 600 + draw, 3.0);
    const Vec p = random_point(g.domain(), rng, 0.4);
    const auto [v, w] = random_plane(g(p), rng);
    (void)w;
    const GeodesicPath path = shoot_geodesic(g, p, v, 1.0, 1e-3);
    CHECK(speed_drift(g, path) <= 1e-6);
  }
}

TEST_CASE("grid_curvature_report verdicts") {
  ReportOptions o;
  o.resolution = {5, 5, 5};
  o.plane_samples = 3;
  const CurvatureReport flat = grid_curvature_report(models::flat_box(3), {BoundSpec::parse("Sect < 0.1")}, o);
  CHECK(flat.all_hold());
  CHECK(flat.sect_min == 0.0);
  CHECK(flat.sect_max == 0.0);

  o.resolution = {7, 7};
  const CurvatureReport s1 = grid_curvature_report(models::sphere(1.0), {BoundSpec::parse("Sect < 0.5")}, o);
  REQUIRE(s1.bound_verdicts.size() == 1);
  CHECK_FALSE(s1.bound_verdicts[0].holds);
  CHECK(s1.bound_verdicts[0].worst_value == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(s1.sect_min <= s1.sect_max);
  CHECK(s1.ric_eig_min <= s1.ric_eig_max);
  CHECK(models::sphere(1.0).domain().contains(s1.bound_verdicts[0].worst_point));

  const ChartMetric hc = models::hyperbolic_collar().to_collar().as_chart();
  const CurvatureReport neg = grid_curvature_report(hc, {BoundSpec::parse("Sect < 0")}, o);
  CHECK(neg.all_hold());
  CHECK(neg.sect_max < 0.0);

  CHECK_THROWS_AS(grid_curvature_report(hc, {}, o), UsageError);
}

TEST_CASE("grid_curvature_report repeats exactly with the same seed") {
  ReportOptions o;
  o.resolution = {9, 9};
  o.plane_samples = 4;
  o.seed = 17;
  o.keep_samples = true;
  const ChartMetric g = models::random_analytic(2, 3);
  const CurvatureReport a = grid_curvature_report(g, {BoundSpec::parse("Scal < 10")}, o);
  const CurvatureReport b = grid_curvature_report(g, {BoundSpec::parse("Scal < 10")}, o);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].sect == b.samples[i].sect);
  CHECK(a.sect_max == b.sect_max);
}

TEST_CASE("parallel_for fills every slot and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::count(hits.begin(), hits.end(), 1) == 1000);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw InputError("seven");
                  }),
                  InputError);
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(worker_count() >= 1);
}

TEST_CASE("curve_length of a straight segment and a circle") {
  const ChartMetric flat = models::flat_box(2, 2.0);
  const double L = curve_length(
      flat, [](double t) { return vec({t, 0.5 * t}); }, [](double) { return vec({1.0, 0.5}); },
      -1.0, 1.0);
  CHECK(L == doctest::Approx(2.0 * std::sqrt(1.25)).epsilon(1e-12));
  const double C = curve_length(
      polar(), [](double t) { return vec({2.0, t}); }, [](double) { return vec({0.0, 1.0}); },
      -0.5, 0.5);
  CHECK(C == doctest::Approx(2.0).epsilon(1e-12));
}

}  // TEST_SUITE

#include "collarext/models.hpp"

#include "collarext/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace collarext::models {

using std::numbers::pi;

ChartMetric flat_box(int m, double half_width) {
  return ChartMetric(Box::cube(m, half_width), [m](const Vec&) -> Mat { return Mat::Identity(m, m); });
}

ChartMetric sphere(double r) {
  if (!(r > 0.0)) throw UsageError("sphere: radius must be positive");
  Vec lo(2), hi(2);
  lo << 0.2, -pi;
  hi << pi - 0.2, pi;
  return ChartMetric(Box(lo, hi), [r](const Vec& p) -> Mat {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = r * r;
    g(1, 1) = r * r * std::sin(p[0]) * std::sin(p[0]);
    return g;
  });
}

ChartMetric sphere_cross_line() {
  Vec lo(3), hi(3);
  lo << 0.2, -pi, -1.0;
  hi << pi - 0.2, pi, 1.0;
  return ChartMetric(Box(lo, hi), [](const Vec& p) -> Mat {
    Mat g = Mat::Identity(3, 3);
    g(1, 1) = std::sin(p[0]) * std::sin(p[0]);
    return g;
  });
}

WarpedProfile warped_sinh() {
  WarpedProfile w;
  w.f = [](double s) { return std::sinh(s); };
  w.base_metric = Mat::Identity(1, 1);
  w.s_min = 0.5;
  w.s_max = 3.0;
  w.base_box = Box(Vec::Constant(1, -pi), Vec::Constant(1, pi));
  return w;
}

WarpedProfile flat_annulus(double r) {
  if (!(r > 0.0)) throw UsageError("flat_annulus: radius must be positive");
  WarpedProfile w;
  w.f = [r](double s) { return r + s; };
  w.base_metric = Mat::Identity(1, 1);
  w.s_min = -0.5 * r;
  w.s_max = 0.5 * r;
  w.base_box = Box(Vec::Constant(1, -pi), Vec::Constant(1, pi));
  return w;
}

WarpedProfile hyperbolic_collar(int m, double shift, double s_min, double s_max) {
  if (m < 2) throw UsageError("hyperbolic_collar: dimension must be >= 2");
  WarpedProfile w;
  w.f = [shift](double s) { return std::cosh(s + shift); };
  w.base_metric = Mat::Identity(m - 1, m - 1);
  w.s_min = s_min;
  w.s_max = s_max;
  w.base_box = Box::cube(m - 1, 1.0);
  return w;
}

namespace {

struct Mode {
  Vec k;
  double phase;
  double amp;
};

std::vector<Mode> random_modes(int m, int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> wave(-1.5, 1.5), phase(0.0, 2.0 * pi), amp(-1.0, 1.0);
  std::vector<Mode> modes;
  for (int i = 0; i < count; ++i) {
    Mode md{Vec(m), phase(rng), amp(rng)};
    for (int a = 0; a < m; ++a) md.k[a] = wave(rng);
    modes.push_back(md);
  }
  return modes;
}

double eval_modes(const std::vector<Mode>& modes, const Vec& p) {
  double s = 0.0;
  for (const auto& md : modes) s += md.amp * std::sin(md.k.dot(p) + md.phase);
  return s / static_cast<double>(modes.size());
}

}  // namespace

ChartMetric random_analytic(int m, std::uint64_t seed, double half_width) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Mode>> entries;
  for (int i = 0; i < m * (m + 1) / 2; ++i) entries.push_back(random_modes(m, 3, rng));
  return ChartMetric(Box::cube(m, half_width), [m, entries](const Vec& p) -> Mat {
    Mat g = 2.0 * Mat::Identity(m, m);
    int e = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        const double v = 0.3 * eval_modes(entries[e++], p) / m;
        g(i, j) += v;
        if (i != j) g(j, i) += v;
      }
    return g;
  });
}

ScalarField random_conformal_factor(const Box& domain, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed ^ 0x5bd1e995ull);
  auto modes = random_modes(domain.dim(), 4, rng);
  return ScalarField{domain, [modes, amplitude](const Vec& p) {
                       return amplitude * eval_modes(modes, p) * 4.0;
                     }};
}

ModelSpec parse_model(const std::string& text) {
  ModelSpec spec;
  spec.text = text;
  const auto open = text.find('(');
  spec.name = text.substr(0, open);
  if (open != std::string::npos) {
    if (text.back() != ')') throw UsageError("model '" + text + "': missing ')'");
    std::string inner = text.substr(open + 1, text.size() - open - 2);
    std::size_t pos = 0;
    while (pos <= inner.size()) {
      const auto comma = inner.find(',', pos);
      const std::string item = inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        std::size_t used = 0;
        spec.args.push_back(std::stod(item, &used));
        while (used < item.size() && item[used] == ' ') ++used;
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw UsageError("model '" + text + "': bad argument '" + item + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  struct Arity {
    const char* name;
    std::size_t args;
  };
  static const Arity known[] = {{"flat_box", 1},          {"sphere", 1},
                                {"sphere_cross_line", 0}, {"warped_sinh", 0},
                                {"flat_annulus", 1},      {"hyperbolic_collar", 0},
                                {"random_analytic", 1}};
  for (const auto& k : known) {
    if (spec.name != k.name) continue;
    if (spec.args.size() != k.args) {
      throw UsageError("model '" + text + "': expected " + std::to_string(k.args) + " argument(s)");
    }
    return spec;
  }
  throw UsageError("unknown model '" + text + "' (see list-models)");
}

namespace {

int dimension_arg(const ModelSpec& spec) {
  const double m = spec.args.at(0);
  if (m != std::floor(m) || m < 1 || m > 8) {
    throw UsageError("model '" + spec.text + "': dimension must be an integer in [1, 8]");
  }
  return static_cast<int>(m);
}

}  // namespace

bool is_collar_model(const ModelSpec& spec) {
  return spec.name == "flat_annulus" || spec.name == "hyperbolic_collar" ||
         spec.name == "warped_sinh";
}

WarpedProfile collar_model(const ModelSpec& spec) {
  if (spec.name == "flat_annulus") return flat_annulus(spec.args.at(0));
  if (spec.name == "hyperbolic_collar") return hyperbolic_collar();
  if (spec.name == "warped_sinh") return warped_sinh();
  throw UsageError("model '" + spec.text + "' is not a collar model");
}

ChartMetric chart_model(const ModelSpec& spec, double half_width, std::uint64_t seed) {
  const double hw = half_width > 0.0 ? half_width : 1.0;
  if (spec.name == "flat_box") return flat_box(dimension_arg(spec), hw);
  if (spec.name == "random_analytic") return random_analytic(dimension_arg(spec), seed, hw);
  if (spec.name == "sphere") return sphere(spec.args.at(0));
  if (spec.name == "sphere_cross_line") return sphere_cross_line();
  return collar_model(spec).to_collar().as_chart();
}

std::vector<CatalogEntry> catalog() {
  return {
      {"flat_box(m)", "Euclidean metric on (-1,1)^m"},
      {"sphere(r)", "round sphere of radius r, polar chart (theta, phi)"},
      {"sphere_cross_line", "product S^2(1) x R, chart (theta, phi, z)"},
      {"warped_sinh", "ds^2 + sinh(s)^2 dtheta^2 on s in (0.5, 3): hyperbolic plane"},
      {"flat_annulus(r)", "flat polar collar f(s) = r + s around the circle of radius r"},
      {"hyperbolic_collar", "ds^2 + cosh(s + 1)^2 g_flat, strictly convex s = 0 slice, Sect < 0"},
      {"random_analytic(m)", "smooth random SPD metric 2I + 0.3 S(p) on (-1,1)^m"},
      {"free(N)", "free group on N generators, reduced-word normal form"},
      {"Zm(m)", "free abelian group Z^m, standard generators"},
      {"heisenberg", "integral Heisenberg group, triples (a,b,c), generators +-a, +-c"},
      {"product(G,H,...)", "direct product with the union generating set"},
      {"freeprod(G,H,...)", "free product, alternating normal form"},
  };
}

}  // namespace collarext::models

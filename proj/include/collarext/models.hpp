#pragma once

// Built-in model metrics shared by the CLI scenarios and the test suites.

#include "collarext/collar.hpp"
#include "collarext/tensor_core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace collarext::models {

/// Euclidean metric on the cube (-half_width, half_width)^m.
ChartMetric flat_box(int m, double half_width = 1.0);

/// Round sphere of radius r in polar coordinates (theta, phi),
/// theta in (0.2, pi - 0.2), phi in (-pi, pi).
ChartMetric sphere(double r);

/// S^2(1) x R in coordinates (theta, phi, z).
ChartMetric sphere_cross_line();

/// ds^2 + sinh(s)^2 d theta^2 on s in (0.5, 3): the hyperbolic plane.
WarpedProfile warped_sinh();

/// Flat polar collar around the circle of radius r: f(s) = r + s on
/// s in (-r/2, r/2), angular coordinate in (-pi, pi).
WarpedProfile flat_annulus(double r);

/// Constant curvature -1 collar f(s) = cosh(s + shift) with flat base of
/// dimension m - 1. The s = 0 slice is strictly convex for shift > 0.
WarpedProfile hyperbolic_collar(int m = 2, double shift = 1.0, double s_min = -0.5,
                                double s_max = 1.0);

/// Smooth random metric 2 I + 0.3 S(p), S symmetric with trigonometric
/// entries bounded by 1/m, so the metric is uniformly positive definite.
ChartMetric random_analytic(int m, std::uint64_t seed, double half_width = 1.0);

/// Smooth random conformal factor built from a few trigonometric modes.
ScalarField random_conformal_factor(const Box& domain, std::uint64_t seed, double amplitude = 0.3);

/// A model identifier such as "sphere(2)" or "hyperbolic_collar".
struct ModelSpec {
  std::string name;
  std::vector<double> args;
  std::string text;
};

/// Throws UsageError for unknown names or wrong argument counts.
ModelSpec parse_model(const std::string& text);

/// Chart metric of any model. half_width applies to flat_box and
/// random_analytic (<= 0 keeps the default 1); seed to random_analytic.
ChartMetric chart_model(const ModelSpec& spec, double half_width = 0.0, std::uint64_t seed = 0);

/// Warped collar models: flat_annulus(r), hyperbolic_collar, warped_sinh.
bool is_collar_model(const ModelSpec& spec);
WarpedProfile collar_model(const ModelSpec& spec);

struct CatalogEntry {
  std::string id;
  std::string description;
};

/// Stable catalog of model metrics and groups understood by the CLI.
std::vector<CatalogEntry> catalog();

}  // namespace collarext::models

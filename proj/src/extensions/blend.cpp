#include "collarext/errors.hpp"
#include "collarext/extensions.hpp"

#include <algorithm>
#include <cmath>

namespace collarext {

namespace {

double smoothstep5(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (u * (6.0 * u - 15.0) + 10.0);
}

}  // namespace

BlendSpec BlendSpec::quintic(double S) {
  if (!(S > 0.0)) throw UsageError("BlendSpec: collar depth must be positive");
  const double q = 0.25 * S;
  BlendSpec b;
  b.S = S;
  b.phi_h = [q](double t) { return 1.0 - smoothstep5((t - q) / q); };
  b.phi_j = [q](double t) { return smoothstep5((t - q) / q); };
  return b;
}

bool BlendCheck::ok(double tol) const {
  return partition_error <= tol && inner_error <= tol && outer_error <= tol && max_slope <= 0.0;
}

BlendCheck check_blend(const BlendSpec& b, int samples) {
  BlendCheck c;
  const double top = 4.0 * b.S;
  double prev = b.phi_h(top / samples);
  for (int i = 1; i <= samples; ++i) {
    const double t = top * i / samples;
    const double h = b.phi_h(t);
    c.partition_error = std::max(c.partition_error, std::abs(h + b.phi_j(t) - 1.0));
    if (t <= 0.25 * b.S) c.inner_error = std::max(c.inner_error, std::abs(h - 1.0));
    if (t >= 0.5 * b.S) c.outer_error = std::max(c.outer_error, std::abs(h));
    if (i > 1) c.max_slope = std::max(c.max_slope, h - prev);
    prev = h;
  }
  return c;
}

}  // namespace collarext

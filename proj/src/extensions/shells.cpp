#include "collarext/errors.hpp"
#include "collarext/extensions.hpp"

#include <cmath>

namespace collarext {

void ShellPlan::validate() const {
  for (std::size_t j = 0; j < shells.size(); ++j) {
    if (!(shells[j].q > 0.0) || !std::isfinite(shells[j].q)) {
      throw UsageError("ShellPlan: gap q_" + std::to_string(j + 1) + " must be positive");
    }
    if (j > 0 && !(shells[j].t > shells[j - 1].t)) {
      throw UsageError("ShellPlan: radii must be strictly increasing");
    }
  }
}

ShellPlan ShellPlan::geometric(int n, double ratio) {
  ShellPlan p;
  for (int j = 1; j <= n; ++j) p.shells.push_back({static_cast<double>(j), std::pow(ratio, j)});
  p.validate();
  return p;
}

std::vector<double> shell_completion(const ShellPlan& plan) {
  plan.validate();
  std::vector<double> c;
  c.reserve(plan.shells.size());
  for (const auto& sh : plan.shells) {
    if (sh.q >= 1.0) {
      c.push_back(1.0);
      continue;
    }
    double f = 1.0 / sh.q;
    while (f * sh.q < 1.0) f = std::nextafter(f, INFINITY);
    c.push_back(f);
  }
  return c;
}

std::vector<double> scaled_crossing_lengths(const ShellPlan& plan,
                                            const std::vector<double>& factors) {
  if (factors.size() != plan.shells.size()) {
    throw UsageError("scaled_crossing_lengths: one factor per shell required");
  }
  std::vector<double> out;
  for (std::size_t j = 0; j < factors.size(); ++j) out.push_back(factors[j] * plan.shells[j].q);
  return out;
}

double shell_factor_at(const ShellPlan& plan, const std::vector<double>& factors, double t) {
  if (factors.size() != plan.shells.size()) {
    throw UsageError("shell_factor_at: one factor per shell required");
  }
  for (std::size_t j = 0; j < plan.shells.size(); ++j) {
    if (t <= plan.shells[j].t) return factors[j];
  }
  return 1.0;
}

}  // namespace collarext

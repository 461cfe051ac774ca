#include "collarext/errors.hpp"
#include "collarext/obstructions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace collarext {

double free_group_entropy(int N) {
  if (N < 2) throw UsageError("free_group_entropy: N must be >= 2");
  return std::log(2.0 * N - 1.0);
}

double bg_comparison_volume(int m, double C, double R) {
  if (m < 2) throw UsageError("bg_comparison_volume: m must be >= 2");
  if (!(C >= 0.0)) throw UsageError("bg_comparison_volume: C must be >= 0");
  if (!(R > 0.0)) throw UsageError("bg_comparison_volume: R must be positive");
  const double sphere_area = 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
  if (C * R < 1e-4) {
    return sphere_area * (std::pow(R, m) / m +
                          (m - 1) * C * C * std::pow(R, m + 2) / (6.0 * (m + 2)));
  }
  auto integrand = [m, C](double t) { return std::pow(std::sinh(C * t) / C, m - 1); };
  return sphere_area *
         boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, R, 15, 1e-14);
}

double smg_threshold(int m, double diam, double entropy_h) {
  if (m < 2) throw UsageError("smg_threshold: m must be >= 2");
  if (!(diam > 0.0)) throw UsageError("smg_threshold: diam must be positive");
  if (!(entropy_h >= 0.0)) throw UsageError("smg_threshold: entropy must be non-negative");
  return entropy_h / (2.0 * (m - 1) * diam);
}

std::int64_t tbg_N_threshold(int m, double delta, double C) {
  if (m < 2) throw UsageError("tbg_N_threshold: m must be >= 2");
  if (!(delta > 0.0)) throw UsageError("tbg_N_threshold: delta must be positive");
  if (!(C >= 0.0)) throw UsageError("tbg_N_threshold: C must be >= 0");
  const double threshold = 0.5 + 0.5 * std::exp(2.0 * (m - 1) * delta * C);
  if (!(threshold < 9e15)) throw UsageError("tbg_N_threshold: threshold out of range");
  return static_cast<std::int64_t>(std::floor(threshold)) + 1;
}

int anderson_bound(int k, int h) {
  if (h < 0 || k < h) throw UsageError("anderson_bound: need k >= h >= 0");
  return k - h;
}

}  // namespace collarext

#pragma once

// Divergent-path-length evidence for completeness of constructed metrics.
// Numerics cannot prove divergence; a "diverges" verdict needs the partial
// sums to pass the cap or to be classified unbounded by the growth fit, and
// "finite" is only returned together with an explicit upper bound.

#include "collarext/shell_plan.hpp"
#include "collarext/tensor_core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace collarext {

enum class Verdict { diverges, finite, inconclusive };
enum class GrowthClass { bounded, logarithmic, polynomial, superpolynomial, undetermined };

std::string to_string(Verdict v);
std::string to_string(GrowthClass g);

struct DivergenceVerdict {
  Verdict verdict = Verdict::inconclusive;
  std::vector<double> evidence;  // non-decreasing partial integrals / sums
  GrowthClass growth_fit = GrowthClass::undetermined;
  std::optional<double> upper_bound;  // set when verdict == finite
  // Radial lengths only: the shell lower bound partial sums at each cutoff.
  std::vector<double> shell_bound;
  GrowthClass shell_growth = GrowthClass::undetermined;
};

struct CompletenessOptions {
  double divergence_cap = 1e6;
  double quad_tol = 1e-10;
};

struct GrowthFit {
  GrowthClass kind = GrowthClass::undetermined;
  std::optional<double> bound;  // for bounded sequences
  double exponent = 0.0;        // increment decay exponent when fitted
};

/// Classifies a non-decreasing sequence from the tail of its increments:
/// geometric growth, geometric decay (bounded, with a tail bound) or a
/// power law Delta_k ~ k^-p (p < 0.9 polynomial, p ~ 1 logarithmic,
/// p > 1.2 bounded by the integral test).
GrowthFit classify_growth(const std::vector<double>& partial_sums);

/// delta_k = s_star 2^-k, k = 1..count.
std::vector<double> default_cutoffs(double s_star, int count = 10);

/// Length of the radial path s in [0, s_star) for the metric e^{2 phi} h,
/// i.e. partial integrals of e^phi up to s_star - delta_k, together with the
/// shell lower bound sum (1/3) e^{phi(t_n)} (t_n - t_{n-1}),
/// t_n = s_star (1 - 1/n), over the shells inside each cutoff.
/// Values of e^phi beyond the double range (phi = +inf included) saturate
/// to +inf; NaN or -inf phi throws InputError.
DivergenceVerdict radial_length(const std::function<double(double)>& phi, double s_star,
                                std::vector<double> cutoffs = {},
                                const CompletenessOptions& options = {});

/// Partial sums of min(1, c_j q_j), the guaranteed crossing lengths.
DivergenceVerdict shell_series(const ShellPlan& plan, const std::vector<double>& factors,
                               const CompletenessOptions& options = {});

struct EscapeTrial {
  Vec p0, v0;
  bool exited = false;
  double exit_time = 0.0;
};

struct EscapeReport {
  std::vector<EscapeTrial> trials;
  std::size_t exited = 0;
  std::size_t survived = 0;
};

/// Shoots geodesics from random points of the chart box (kept at least
/// 10 fd steps from the faces) in random g-unit directions and records
/// whether they reach the box edge before time T. Diagnostic only.
EscapeReport geodesic_escape_probe(const ChartMetric& g, int trials, double T,
                                   std::uint64_t seed = 0, double step = 1e-3);

}  // namespace collarext

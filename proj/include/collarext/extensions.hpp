#pragma once

// Constructive extensions of a manifold with boundary past its boundary,
// each returning the new metric plus what is needed to verify it.

#include "collarext/collar.hpp"
#include "collarext/completeness.hpp"
#include "collarext/curvature_report.hpp"
#include "collarext/shell_plan.hpp"
#include "collarext/tensor_core.hpp"

#include <functional>
#include <string>
#include <vector>

namespace collarext {

/// One attempt of a doubling parameter search.
struct SearchStep {
  std::string parameter;
  double value = 0.0;
  double worst = 0.0;  // target quantity at this attempt
  bool accepted = false;
};

// ---------------------------------------------------------------------------
// Convexifying extension

/// Partition of unity phi_h + phi_j = 1 on (0, inf) with phi_h = 1 on
/// (0, S/4] and phi_h = 0 on [S/2, inf).
struct BlendSpec {
  double S = 1.0;
  std::function<double(double)> phi_h;
  std::function<double(double)> phi_j;

  /// phi_h(t) = 1 - q((t - S/4) / (S/4)), q the quintic smoothstep
  /// 6u^5 - 15u^4 + 10u^3 clamped to [0, 1].
  static BlendSpec quintic(double S);
};

struct BlendCheck {
  double partition_error = 0.0;  // max |phi_h + phi_j - 1|
  double inner_error = 0.0;      // max |phi_h - 1| on (0, S/4]
  double outer_error = 0.0;      // max |phi_h| on [S/2, 4S]
  double max_slope = 0.0;        // max sampled forward difference of phi_h
  bool ok(double tol = 1e-12) const;
};

BlendCheck check_blend(const BlendSpec& b, int samples = 4000);

/// Slice family equal to h_s for s <= 0 and to
/// phi_h(s) h_s + phi_j(s) k^{-1/2} sinh(sqrt(k) s) g_boundary for s > 0,
/// defined on (h.s_min(), s_max). h must cover (-S, S).
CollarMetric convexify_metric(const Mat& g_boundary, const CollarMetric& h, double k,
                              const BlendSpec& blend, double s_max);

struct ConvexifyOptions {
  double k0 = 1.0;
  double k_max = 1073741824.0;  // 2^30
  double hess_tol = 1e-8;
  double s_max = 0.0;      // end of the extended collar; 0 means 4S
  double verify_to = 0.0;  // principal values checked on (0, verify_to]; 0 means 3S
  int s_samples = 96;
  int x_resolution = 5;
  double num_tol = 1e-5;
};

struct ConvexifyResult {
  CollarMetric metric;
  double k = 0.0;
  double worst_eigenvalue = 0.0;  // largest sampled principal value for s > 0
  double worst_s = 0.0;
  std::vector<SearchStep> trace;
};

/// Doubles k from k0 until every sampled principal value on s in
/// (0, verify_to] is <= -hess_tol. Throws PreconditionError when h_0 differs
/// from g_boundary, SearchFailure when k_max is exceeded.
ConvexifyResult convexify_extension(const Mat& g_boundary, const CollarMetric& h,
                                    const BlendSpec& blend, const ConvexifyOptions& options = {});

struct GeodesicProbeReport {
  int probes = 0;
  int stayed_inside = 0;
  double worst_excursion = 0.0;  // largest s between the first and last interior sample
};

/// Shoots `probes` geodesics of the extended metric from points with
/// s in (-S/2, -S/8) and checks that between their first and last sample
/// with s < 0 they never rise above s = tol.
GeodesicProbeReport convexity_geodesic_probe(const CollarMetric& extended, double S, int probes,
                                             std::uint64_t seed, double T = 2.0,
                                             double step = 1e-3, double tol = 1e-6);

// ---------------------------------------------------------------------------
// Negatively curved extension

/// exp(tan(pi (s / s_star - 1/2))) on (0, s_star), 0 for s <= 0.
std::function<double(double)> default_conformal_profile(double s_star);

struct NegativeSectOptions {
  int precheck_resolution = 9;  // per axis, Sect_h < 0 grid
  int profile_samples = 400;    // phi monotonicity / convexity samples
  std::uint64_t seed = 0;
  double num_tol = 1e-5;
};

struct NegativeSectExtension {
  ChartMetric base;    // h on (s_min, s_star) x boundary box
  ChartMetric metric;  // e^{2 phi(s)} h on the same box
  ScalarField phi;
  std::function<double(double)> profile;
  double s_star = 1.0;
};

/// Conformal blow-up e^{2 phi(s)} h of a negatively curved collar. An empty
/// profile selects default_conformal_profile. Throws PreconditionError with
/// the offending s when phi is nonzero on s <= 0, decreasing or concave at
/// a sample, or when the sampled Sect_h is not negative.
NegativeSectExtension negative_sect_extension(const CollarMetric& h, double s_star,
                                              std::function<double(double)> profile = {},
                                              const NegativeSectOptions& options = {});

struct NegativeSectVerifyOptions {
  std::vector<int> resolution;  // empty means 33 per axis
  int plane_samples = 8;
  std::uint64_t seed = 0;
  double phi_ceiling = 30.0;  // grid stops where phi exceeds this
  double agreement_tol = 1e-4;
  std::vector<double> cutoffs;  // radial-length cutoffs; empty means default
};

struct NegativeSectPoint {
  Vec point;
  double sect_max = 0.0;
  double disagreement = 0.0;
};

struct NegativeSectVerification {
  std::size_t samples = 0;
  double sect_max = 0.0;  // from the conformal transformation law
  Vec worst_point;
  bool sect_negative = false;
  double max_disagreement = 0.0;  // conformal law vs direct computation
  bool paths_agree = false;
  double s_upper = 0.0;  // upper end of the verification grid in s
  std::vector<NegativeSectPoint> points;  // row-major grid order
  DivergenceVerdict radial;
};

NegativeSectVerification verify_negative_sect(const NegativeSectExtension& ext,
                                              const NegativeSectVerifyOptions& options = {});

// ---------------------------------------------------------------------------
// Completion by shell scaling

/// c_j = max(1, 1/q_j), rounded up if needed so that c_j q_j >= 1 holds in
/// floating point.
std::vector<double> shell_completion(const ShellPlan& plan);

/// c_j q_j per shell.
std::vector<double> scaled_crossing_lengths(const ShellPlan& plan,
                                            const std::vector<double>& factors);

/// Piecewise-constant conformal factor: c_j on (t_{j-1}, t_j] (c_1 on
/// everything up to t_1), 1 beyond the last shell.
double shell_factor_at(const ShellPlan& plan, const std::vector<double>& factors, double t);

// ---------------------------------------------------------------------------
// Curvature decay by stretching

struct GreeneOptions {
  int s_resolution = 17;  // per shell
  int x_resolution = 3;   // per boundary axis
  int plane_samples = 4;
  std::uint64_t seed = 0;
  double join_fraction = 0.05;  // join width / shorter adjacent shell
};

struct GreeneResult {
  WarpedProfile profile;
  std::vector<double> old_boundaries;  // b_0 < ... < b_n
  std::vector<double> new_boundaries;  // B_0 < ... < B_n
  std::vector<double> sampled_curvature;  // max |Sect| per shell before stretching
  std::vector<double> factors;            // c_i
  std::vector<double> join_widths;        // at B_1 .. B_{n-1}
};

/// Shells are [t_{i-1}, t_i] over consecutive plan radii (n + 1 radii give
/// n shells). Shell i is rescaled homothetically by c_i =
/// max(1, ceil(sqrt(K_i / eps_i))): s = b_{i-1} + (sigma - B_{i-1}) / c_i and
/// F(sigma) = c_i f(s). log F is blended across each join by a quintic
/// smoothstep over join_fraction of the shorter adjacent shell. Throws
/// InputError on non-finite curvature samples.
GreeneResult greene_stretch(const WarpedProfile& f, const ShellPlan& shells,
                            const std::vector<double>& eps, const GreeneOptions& options = {});

struct GreeneShellCheck {
  double max_abs_sect = 0.0;
  double eps = 0.0;
  bool holds = false;
};

/// Sampled max |Sect| of the stretched profile on each shell core (the shell
/// minus the join windows), compared with eps_i + slack.
std::vector<GreeneShellCheck> verify_greene(const GreeneResult& r, const std::vector<double>& eps,
                                            const GreeneOptions& options = {}, double slack = 1e-5);

// ---------------------------------------------------------------------------
// Ricci lowering patch

/// Smooth step chi(r) = psi(r-1) / (psi(r-1) + psi(2-r)), psi(t) = e^{-1/t}
/// for t > 0: chi = 0 on (-inf, 1], 1 on [2, inf).
double lohkamp_cutoff(double r);

struct LohkampBump {
  double d = 1.0;
  double s_amp = 1.0;
  Box chart;  // image of the ball B_6, an affine cube

  /// Ball coordinates (z - center) * 6 / half-width.
  Vec to_ball(const Vec& z) const;
};

/// s_amp exp(-d / (5 - r chi(r))) for r = |to_ball(z)| < 5, else 0.
double lohkamp_bump(const LohkampBump& b, const Vec& z);

struct LohkampOptions {
  double annulus_inner = 2.0;
  double annulus_outer = 4.0;
  double support_radius = 5.0;
  double d_max = 1048576.0;  // 2^20
  double s_max = 1048576.0;  // 2^20
  int resolution = 33;
  double tol = 1e-9;  // allowed increase on the transition shell (4, 5)
};

struct LohkampResult {
  ChartMetric metric;
  LohkampBump bump;
  bool succeeded = false;
  bool degenerate = false;  // target already held; identity deformation
  double worst = 0.0;       // worst annulus value of the final metric
  std::size_t annulus_samples = 0;
  std::vector<SearchStep> trace;
  std::string message;  // failure description when !succeeded
};

/// Conformal deformation e^{2F} g, F = lohkamp_bump, of a metric on the
/// chart ball B_6 (the chart box of g), lowering the largest Ricci
/// eigen-ratio below C on the annulus. Stage one doubles d (with s_amp = 1)
/// until the ratios decrease on the whole annulus and do not increase on
/// the transition shell; stage two doubles s_amp until the worst annulus
/// ratio is below C. Curvature of the deformed metric is evaluated through
/// conformal_ricci. Throws SearchFailure carrying the best worst ratio.
LohkampResult lohkamp_lower(const ChartMetric& g, double C, const LohkampOptions& options = {});

/// Same search with scalar curvature in place of the Ricci eigen-ratios.
LohkampResult lohkamp_lower_scalar(const ChartMetric& g, double C,
                                   const LohkampOptions& options = {});

/// Non-throwing form of the two searches: on failure the result carries
/// succeeded = false, the full trace, the best worst value and a message.
LohkampResult lohkamp_search(const ChartMetric& g, double C, bool scalar_target,
                             const LohkampOptions& options = {});

struct LohkampMonotonicity {
  double worst_found = 0.0;
  double worst_doubled = 0.0;
  bool holds = false;
};

/// Worst annulus Ricci ratio at the found (d, s_amp) and at (2d, s_amp).
LohkampMonotonicity lohkamp_monotonicity(const ChartMetric& g, const LohkampResult& r,
                                         const LohkampOptions& options = {});

}  // namespace collarext

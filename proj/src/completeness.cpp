#include "collarext/completeness.hpp"

#include "collarext/errors.hpp"
#include "collarext/geodesic.hpp"
#include "collarext/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace collarext {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool unbounded(GrowthClass g) {
  return g == GrowthClass::logarithmic || g == GrowthClass::polynomial ||
         g == GrowthClass::superpolynomial;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::diverges: return "diverges";
    case Verdict::finite: return "finite";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(GrowthClass g) {
  switch (g) {
    case GrowthClass::bounded: return "bounded";
    case GrowthClass::logarithmic: return "logarithmic";
    case GrowthClass::polynomial: return "polynomial";
    case GrowthClass::superpolynomial: return "superpolynomial";
    case GrowthClass::undetermined: return "undetermined";
  }
  return "?";
}

GrowthFit classify_growth(const std::vector<double>& partial_sums) {
  GrowthFit fit;
  const std::size_t n = partial_sums.size();
  if (n < 4) return fit;
  if (std::any_of(partial_sums.begin(), partial_sums.end(), [](double e) { return std::isinf(e); })) {
    fit.kind = GrowthClass::superpolynomial;
    return fit;
  }
  std::vector<double> inc;
  for (std::size_t k = 1; k < n; ++k) inc.push_back(partial_sums[k] - partial_sums[k - 1]);
  const std::size_t tail = std::max<std::size_t>(3, inc.size() / 2);
  const std::size_t first = inc.size() - tail;
  const double last_sum = partial_sums.back();

  bool all_zero = true;
  for (std::size_t k = first; k < inc.size(); ++k) all_zero = all_zero && inc[k] == 0.0;
  if (all_zero) {
    fit.kind = GrowthClass::bounded;
    fit.bound = last_sum;
    return fit;
  }

  std::vector<double> ratios;
  for (std::size_t k = first; k + 1 < inc.size(); ++k) {
    ratios.push_back(inc[k] > 0.0 ? inc[k + 1] / inc[k] : kInf);
  }
  double log_mean = 0.0;
  for (double r : ratios) log_mean += std::log(r);
  log_mean /= static_cast<double>(ratios.size());
  if (log_mean > std::log(1.05)) {
    fit.kind = GrowthClass::superpolynomial;
    return fit;
  }
  const double rho = *std::max_element(ratios.begin(), ratios.end());
  if (rho <= 0.95) {
    fit.kind = GrowthClass::bounded;
    fit.bound = last_sum + inc.back() * rho / (1.0 - rho);
    return fit;
  }

  // Power law inc_k ~ k^-p on the tail, k counted from 1.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t k = first; k < inc.size(); ++k) {
    if (!(inc[k] > 0.0)) continue;
    const double x = std::log(static_cast<double>(k + 1)), y = std::log(inc[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 3) return fit;
  const double p = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  fit.exponent = p;
  if (p < 0.9) {
    fit.kind = GrowthClass::polynomial;
  } else if (std::abs(p - 1.0) <= 0.1) {
    fit.kind = GrowthClass::logarithmic;
  } else if (p > 1.2) {
    fit.kind = GrowthClass::bounded;
    const double K = static_cast<double>(inc.size());
    fit.bound = last_sum + inc.back() * K / (p - 1.0);
  }
  return fit;
}

std::vector<double> default_cutoffs(double s_star, int count) {
  std::vector<double> c;
  for (int k = 1; k <= count; ++k) c.push_back(s_star * std::ldexp(1.0, -k));
  return c;
}

DivergenceVerdict radial_length(const std::function<double(double)>& phi, double s_star,
                                std::vector<double> cutoffs, const CompletenessOptions& options) {
  if (!(s_star > 0.0)) throw UsageError("radial_length: s_star must be positive");
  if (cutoffs.empty()) cutoffs = default_cutoffs(s_star);
  for (std::size_t k = 0; k < cutoffs.size(); ++k) {
    if (!(cutoffs[k] >= 1e-12) || !(cutoffs[k] < s_star) || (k > 0 && !(cutoffs[k] < cutoffs[k - 1]))) {
      throw UsageError("radial_length: cutoffs must decrease within [1e-12, s_star)");
    }
  }

  auto checked_phi = [&](double s) {
    const double v = phi(s);
    // +inf is a profile that has overflowed on its way to s_star
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
      throw InputError("radial_length: non-finite phi at s = " + std::to_string(s));
    }
    return v;
  };

  DivergenceVerdict out;
  double total = 0.0;
  double a = 0.0;
  for (double delta : cutoffs) {
    const double b = s_star - delta;
    checked_phi(a);
    checked_phi(b);
    bool overflow = false;
    auto integrand = [&](double s) {
      const double e = std::exp(checked_phi(s));
      if (std::isinf(e)) {
        overflow = true;
        return 0.0;
      }
      return e;
    };
    double seg = 0.0;
    if (!std::isinf(total)) {
      seg = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 15,
                                                                          options.quad_tol);
    }
    total = (overflow || std::isinf(total)) ? kInf : total + seg;
    out.evidence.push_back(total);
    a = b;
  }

  // Shell lower bound over t_n = s_star (1 - 1/n), n >= 2, t_n <= s_star - delta.
  double shell = 0.0;
  long n = 2;
  for (double delta : cutoffs) {
    const double n_max = std::floor(s_star / delta);
    if (n_max > 1e8) throw UsageError("radial_length: cutoff too small for the shell bound");
    for (; n <= static_cast<long>(n_max) && !std::isinf(shell); ++n) {
      const double t = s_star * (1.0 - 1.0 / n);
      const double tp = s_star * (1.0 - 1.0 / (n - 1));
      shell += std::exp(checked_phi(t)) * (t - tp) / 3.0;
    }
    out.shell_bound.push_back(shell);
  }

  std::vector<double> ev{0.0}, sb{0.0};
  ev.insert(ev.end(), out.evidence.begin(), out.evidence.end());
  sb.insert(sb.end(), out.shell_bound.begin(), out.shell_bound.end());
  const GrowthFit gf = classify_growth(ev);
  const GrowthFit sf = classify_growth(sb);
  out.growth_fit = gf.kind;
  out.shell_growth = sf.kind;

  const double cap = options.divergence_cap;
  const bool past_cap = out.evidence.back() > cap && out.shell_bound.back() > cap;
  if (unbounded(gf.kind) && (past_cap || unbounded(sf.kind))) {
    out.verdict = Verdict::diverges;
  } else if (gf.kind == GrowthClass::bounded && gf.bound) {
    out.verdict = Verdict::finite;
    out.upper_bound = gf.bound;
  }
  return out;
}

DivergenceVerdict shell_series(const ShellPlan& plan, const std::vector<double>& factors,
                               const CompletenessOptions& options) {
  plan.validate();
  if (factors.size() != plan.shells.size()) {
    throw UsageError("shell_series: one factor per shell required");
  }
  DivergenceVerdict out;
  double sum = 0.0;
  std::vector<double> seq{0.0};
  for (std::size_t j = 0; j < factors.size(); ++j) {
    sum += std::min(1.0, factors[j] * plan.shells[j].q);
    out.evidence.push_back(sum);
    seq.push_back(sum);
  }
  const GrowthFit gf = classify_growth(seq);
  out.growth_fit = gf.kind;
  if (unbounded(gf.kind) || (!out.evidence.empty() && out.evidence.back() > options.divergence_cap)) {
    out.verdict = Verdict::diverges;
  } else if (gf.kind == GrowthClass::bounded && gf.bound) {
    out.verdict = Verdict::finite;
    out.upper_bound = gf.bound;
  }
  return out;
}

EscapeReport geodesic_escape_probe(const ChartMetric& g, int trials, double T, std::uint64_t seed,
                                   double step) {
  if (trials < 1) throw UsageError("geodesic_escape_probe: trials must be >= 1");
  if (!(T >= 0.0)) throw UsageError("geodesic_escape_probe: T must be non-negative");
  const Box inner = g.domain().shrunk(10.0 * g.fd_step());
  const int m = g.dim();
  EscapeReport rep;
  rep.trials.resize(static_cast<std::size_t>(trials));
  parallel_for(rep.trials.size(), [&](std::size_t i) {
    std::mt19937_64 rng(mix_seed(seed, i));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    EscapeTrial& tr = rep.trials[i];
    tr.p0 = Vec(m);
    for (int a = 0; a < m; ++a) tr.p0[a] = inner.lower[a] + u(rng) * (inner.upper[a] - inner.lower[a]);
    tr.v0 = random_plane(g(tr.p0), rng).first;
    if (T == 0.0) return;
    const GeodesicPath path = shoot_geodesic(g, tr.p0, tr.v0, T, step);
    tr.exited = path.exited;
    tr.exit_time = path.exit_time;
  });
  for (const auto& tr : rep.trials) (tr.exited ? rep.exited : rep.survived)++;
  return rep;
}

}  // namespace collarext

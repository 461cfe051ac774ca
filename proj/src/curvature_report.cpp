#include "collarext/curvature_report.hpp"

#include "collarext/errors.hpp"
#include "collarext/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace collarext {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

BoundSpec BoundSpec::parse(const std::string& text) {
  static const std::pair<const char*, Relation> ops[] = {
      {"<=", Relation::less_equal}, {">=", Relation::greater_equal},
      {"<", Relation::less},        {">", Relation::greater}};
  for (const auto& [tok, rel] : ops) {
    const auto pos = text.find(tok);
    if (pos == std::string::npos) continue;
    const std::string lhs = lower(trim(text.substr(0, pos)));
    const std::string rhs = trim(text.substr(pos + std::string(tok).size()));
    BoundSpec b;
    b.relation = rel;
    if (lhs == "sect" || lhs == "sectional") {
      b.quantity = CurvatureQuantity::sectional;
    } else if (lhs == "ric" || lhs == "ricci") {
      b.quantity = CurvatureQuantity::ricci;
    } else if (lhs == "scal" || lhs == "scalar") {
      b.quantity = CurvatureQuantity::scalar;
    } else {
      throw UsageError("bound '" + text + "': unknown quantity '" + lhs + "'");
    }
    try {
      std::size_t used = 0;
      b.value = std::stod(rhs, &used);
      if (used != rhs.size()) throw std::invalid_argument(rhs);
    } catch (const std::exception&) {
      throw UsageError("bound '" + text + "': cannot parse value '" + rhs + "'");
    }
    return b;
  }
  throw UsageError("bound '" + text + "': expected one of <, <=, >, >=");
}

std::string BoundSpec::description() const {
  std::ostringstream os;
  switch (quantity) {
    case CurvatureQuantity::sectional: os << "Sect"; break;
    case CurvatureQuantity::ricci: os << "Ric"; break;
    case CurvatureQuantity::scalar: os << "Scal"; break;
  }
  switch (relation) {
    case Relation::less: os << " < "; break;
    case Relation::less_equal: os << " <= "; break;
    case Relation::greater: os << " > "; break;
    case Relation::greater_equal: os << " >= "; break;
  }
  os << value;
  return os.str();
}

double BoundSpec::margin(double sample) const {
  switch (relation) {
    case Relation::less:
    case Relation::less_equal: return value + slack - sample;
    case Relation::greater:
    case Relation::greater_equal: return sample - (value - slack);
  }
  return 0.0;
}

bool BoundSpec::holds(double sample) const {
  const double m = margin(sample);
  const bool strict = relation == Relation::less || relation == Relation::greater;
  return strict ? m > 0.0 : m >= 0.0;
}

bool CurvatureReport::all_hold() const {
  return std::all_of(bound_verdicts.begin(), bound_verdicts.end(),
                     [](const BoundVerdict& v) { return v.holds; });
}

std::vector<Vec> grid_points(const Box& box, const std::vector<int>& resolution) {
  const int m = box.dim();
  std::vector<Vec> pts;
  std::size_t total = 1;
  for (int n : resolution) total *= static_cast<std::size_t>(n);
  pts.reserve(total);
  std::vector<int> idx(m, 0);
  for (std::size_t c = 0; c < total; ++c) {
    Vec p(m);
    for (int a = 0; a < m; ++a) {
      const int n = resolution[a];
      const double t = n == 1 ? 0.5 : static_cast<double>(idx[a]) / (n - 1);
      p[a] = box.lower[a] + t * (box.upper[a] - box.lower[a]);
    }
    pts.push_back(std::move(p));
    for (int a = m - 1; a >= 0; --a) {
      if (++idx[a] < resolution[a]) break;
      idx[a] = 0;
    }
  }
  return pts;
}

CurvatureReport grid_curvature_report(const ChartMetric& g, const std::vector<BoundSpec>& bounds,
                                      const ReportOptions& options) {
  if (bounds.empty()) throw UsageError("grid_curvature_report: empty bound list");
  if (options.plane_samples < 1) throw UsageError("grid_curvature_report: plane_samples < 1");
  const int m = g.dim();
  std::vector<int> res = options.resolution.empty() ? std::vector<int>(m, 33) : options.resolution;
  if (static_cast<int>(res.size()) != m) {
    throw UsageError("grid_curvature_report: resolution has wrong number of axes");
  }
  for (int n : res) {
    if (n < 3) throw UsageError("grid_curvature_report: resolution must be >= 3 per axis");
  }
  const Box box = options.sample_box ? *options.sample_box : g.domain().shrunk(4.0 * g.fd_step());

  std::vector<Vec> pts = grid_points(box, res);
  if (options.include) {
    std::vector<Vec> kept;
    for (auto& p : pts)
      if (options.include(p)) kept.push_back(std::move(p));
    pts = std::move(kept);
  }
  if (pts.empty()) throw UsageError("grid_curvature_report: no grid point selected");

  std::vector<PointSample> samples(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    PointSample& s = samples[i];
    s.point = pts[i];
    const Riemann R = riemann(g, s.point);
    const Mat gm = g(s.point);
    const Mat g_inv = gm.inverse();
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        s.sect.push_back(sectional(R, gm, Vec::Unit(m, a), Vec::Unit(m, b), options.tol));
      }
    std::mt19937_64 rng(mix_seed(options.seed, i));
    for (int k = 0; k < options.plane_samples; ++k) {
      const auto [X, Y] = random_plane(gm, rng);
      s.sect.push_back(sectional(R, gm, X, Y, options.tol));
    }
    const Mat ric = ricci(R, g_inv);
    s.ric_eigs = ricci_eigen_ratios(ric, gm);
    s.scal = scalar(ric, g_inv);
  });

  CurvatureReport rep;
  rep.grid_shape = res;
  rep.point_count = samples.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  rep.sect_min = rep.ric_eig_min = rep.scal_min = inf;
  rep.sect_max = rep.ric_eig_max = rep.scal_max = -inf;
  for (const auto& b : bounds) {
    BoundVerdict v;
    v.bound = b;
    v.worst_point = samples.front().point;
    rep.bound_verdicts.push_back(v);
  }
  std::vector<double> worst_margin(bounds.size(), inf);

  auto check = [&](CurvatureQuantity q, double value, const Vec& p) {
    for (std::size_t b = 0; b < bounds.size(); ++b) {
      if (bounds[b].quantity != q) continue;
      const double mg = bounds[b].margin(value);
      if (mg < worst_margin[b]) {
        worst_margin[b] = mg;
        rep.bound_verdicts[b].worst_point = p;
        rep.bound_verdicts[b].worst_value = value;
      }
      if (!bounds[b].holds(value)) rep.bound_verdicts[b].holds = false;
    }
  };

  for (const auto& s : samples) {
    for (double k : s.sect) {
      rep.sect_min = std::min(rep.sect_min, k);
      rep.sect_max = std::max(rep.sect_max, k);
      check(CurvatureQuantity::sectional, k, s.point);
    }
    rep.plane_sample_count += s.sect.size();
    for (Eigen::Index i = 0; i < s.ric_eigs.size(); ++i) {
      rep.ric_eig_min = std::min(rep.ric_eig_min, s.ric_eigs[i]);
      rep.ric_eig_max = std::max(rep.ric_eig_max, s.ric_eigs[i]);
      check(CurvatureQuantity::ricci, s.ric_eigs[i], s.point);
    }
    rep.scal_min = std::min(rep.scal_min, s.scal);
    rep.scal_max = std::max(rep.scal_max, s.scal);
    check(CurvatureQuantity::scalar, s.scal, s.point);
  }
  if (options.keep_samples) rep.samples = std::move(samples);
  return rep;
}

}  // namespace collarext

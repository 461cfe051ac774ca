#include "collarext/tensor_core.hpp"

#include "collarext/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace collarext {

namespace {

std::string point_str(const Vec& p) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

void require_clearance(const Box& box, const Vec& p, double needed, const char* op) {
  if (p.size() != box.dim()) {
    throw UsageError(std::string(op) + ": point dimension does not match chart");
  }
  if (box.clearance(p) < needed) {
    throw ClearanceError(std::string(op) + ": point " + point_str(p) +
                         " closer than " + std::to_string(needed) + " to the chart boundary");
  }
}

Mat symmetrize(const Mat& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

// ---------------------------------------------------------------- Box

Box::Box(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw UsageError("Box: bounds must be non-empty and of equal dimension");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) throw UsageError("Box: lower bound must be below upper bound");
  }
}

Box Box::cube(int dim, double half_width) {
  return Box(Vec::Constant(dim, -half_width), Vec::Constant(dim, half_width));
}

bool Box::contains(const Vec& p) const { return clearance(p) > 0.0; }

double Box::clearance(const Vec& p) const {
  double c = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    c = std::min({c, p[i] - lower[i], upper[i] - p[i]});
  }
  return c;
}

double Box::shortest_side() const { return (upper - lower).minCoeff(); }

Box Box::shrunk(double margin) const {
  return Box(lower.array() + margin, upper.array() - margin);
}

bool Box::operator==(const Box& other) const {
  return lower.size() == other.lower.size() && lower == other.lower && upper == other.upper;
}

// ---------------------------------------------------------------- ChartMetric

ChartMetric::ChartMetric(Box domain, Components components, double fd_step)
    : domain_(std::move(domain)),
      components_(std::make_shared<const Components>(std::move(components))),
      fd_step_(fd_step > 0.0 ? fd_step : 1e-4 * domain_.shortest_side()) {}

ChartMetric ChartMetric::with_fd_step(double step) const {
  ChartMetric copy = *this;
  copy.fd_step_ = step > 0.0 ? step : 1e-4 * domain_.shortest_side();
  return copy;
}

Mat ChartMetric::operator()(const Vec& p) const { return symmetrize((*components_)(p)); }

Mat ChartMetric::checked(const Vec& p) const {
  Mat g = (*this)(p);
  if (!g.allFinite()) throw DefinitenessError("metric components not finite at " + point_str(p));
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) {
    throw DefinitenessError("metric not positive definite at " + point_str(p));
  }
  return g;
}

// ---------------------------------------------------------------- tensors

double Christoffel::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Riemann::contract(const Vec& X, const Vec& Y) const {
  double sum = 0.0;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) {
      const double xy = X[i] * Y[j];
      if (xy == 0.0) continue;
      for (int k = 0; k < m_; ++k)
        for (int l = 0; l < m_; ++l) sum += (*this)(i, j, k, l) * xy * X[k] * Y[l];
    }
  return sum;
}

double Riemann::symmetry_residual() const {
  double r = 0.0;
  const auto& R = *this;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < m_; ++k)
        for (int l = 0; l < m_; ++l) {
          r = std::max(r, std::abs(R(i, j, k, l) + R(j, i, k, l)));
          r = std::max(r, std::abs(R(i, j, k, l) + R(i, j, l, k)));
          r = std::max(r, std::abs(R(i, j, k, l) - R(k, l, i, j)));
          r = std::max(r, std::abs(R(i, j, k, l) + R(i, k, l, j) + R(i, l, j, k)));
        }
  return r;
}

// ---------------------------------------------------------------- derivatives

MetricJet metric_jet(const ChartMetric& metric, const Vec& p, int order, double h) {
  const int m = metric.dim();
  MetricJet jet;
  jet.g = metric.checked(p);
  jet.g_inv = jet.g.inverse();
  jet.dg.resize(m);
  std::vector<Mat> plus(m), minus(m);
  for (int i = 0; i < m; ++i) {
    Vec q = p;
    q[i] += h;
    plus[i] = metric(q);
    q[i] = p[i] - h;
    minus[i] = metric(q);
    jet.dg[i] = (plus[i] - minus[i]) / (2.0 * h);
  }
  if (order < 2) return jet;

  jet.d2g.assign(m * m, Mat());
  for (int i = 0; i < m; ++i) {
    jet.d2g[i * m + i] = (plus[i] - 2.0 * jet.g + minus[i]) / (h * h);
    for (int j = i + 1; j < m; ++j) {
      Vec q = p;
      q[i] += h;
      q[j] += h;
      const Mat pp = metric(q);
      q[j] = p[j] - h;
      const Mat pm = metric(q);
      q[i] = p[i] - h;
      const Mat mm = metric(q);
      q[j] = p[j] + h;
      const Mat mp = metric(q);
      jet.d2g[i * m + j] = (pp - pm - mp + mm) / (4.0 * h * h);
      jet.d2g[j * m + i] = jet.d2g[i * m + j];
    }
  }
  return jet;
}

namespace {

// Gamma_{k,ij} = 1/2 (d_i g_kj + d_j g_ki - d_k g_ij)
double first_kind(const MetricJet& jet, int k, int i, int j) {
  return 0.5 * (jet.dg[i](k, j) + jet.dg[j](k, i) - jet.dg[k](i, j));
}

Christoffel christoffel_from_jet(const MetricJet& jet) {
  const int m = static_cast<int>(jet.g.rows());
  std::vector<double> lower(m * m * m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) lower[(k * m + i) * m + j] = first_kind(jet, k, i, j);
  Christoffel G(m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        double s = 0.0;
        for (int l = 0; l < m; ++l) s += jet.g_inv(k, l) * lower[(l * m + i) * m + j];
        G(k, i, j) = s;
        G(k, j, i) = s;
      }
  return G;
}

}  // namespace

Christoffel christoffel(const ChartMetric& g, const Vec& p) {
  return christoffel(g, p, g.fd_step());
}

Christoffel christoffel(const ChartMetric& g, const Vec& p, double step) {
  require_clearance(g.domain(), p, 2.0 * step, "christoffel");
  return christoffel_from_jet(metric_jet(g, p, 1, step));
}

Riemann riemann(const ChartMetric& g, const Vec& p) {
  const double h = g.fd_step();
  require_clearance(g.domain(), p, 3.0 * h, "riemann");
  const MetricJet jet = metric_jet(g, p, 2, h);
  const int m = g.dim();
  const Christoffel G = christoffel_from_jet(jet);

  // R_ijkl = d_i Gamma_{k,jl} - d_j Gamma_{k,il}
  //          + Gamma^r_il Gamma_{r,jk} - Gamma^r_jl Gamma_{r,ik}
  auto d2 = [&](int a, int b) -> const Mat& { return jet.d2g[a * m + b]; };
  auto d_first_kind = [&](int a, int k, int j, int l) {
    return 0.5 * (d2(a, j)(k, l) + d2(a, l)(k, j) - d2(a, k)(j, l));
  };
  Riemann R(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          if (k == l) continue;
          double v = d_first_kind(i, k, j, l) - d_first_kind(j, k, i, l);
          for (int r = 0; r < m; ++r) {
            v += G(r, i, l) * first_kind(jet, r, j, k) - G(r, j, l) * first_kind(jet, r, i, k);
          }
          R(i, j, k, l) = v;
        }
    }
  return R;
}

double sectional(const Riemann& R, const Mat& g, const Vec& X, const Vec& Y,
                 const Tolerances& tol) {
  const double xx = X.dot(g * X);
  const double yy = Y.dot(g * Y);
  const double xy = X.dot(g * Y);
  const double area2 = xx * yy - xy * xy;
  if (!(area2 >= tol.plane_tol)) {
    throw DegeneratePlaneError("sectional: |X ^ Y|^2 below plane tolerance");
  }
  return R.contract(X, Y) / area2;
}

double sectional(const ChartMetric& g, const Vec& p, const Vec& X, const Vec& Y,
                 const Tolerances& tol) {
  const Riemann R = riemann(g, p);
  return sectional(R, g(p), X, Y, tol);
}

double sectional(const ChartMetric& g, const TangentVector& X, const TangentVector& Y,
                 const Tolerances& tol) {
  if ((X.base - Y.base).cwiseAbs().maxCoeff() > 0.0) {
    throw UsageError("sectional: tangent vectors have different base points");
  }
  return sectional(g, X.base, X.comps, Y.comps, tol);
}

Mat ricci(const Riemann& R, const Mat& g_inv) {
  const int m = R.dim();
  Mat ric = Mat::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (int l = j; l < m; ++l) {
      double s = 0.0;
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) s += g_inv(i, k) * R(i, j, k, l);
      ric(j, l) = s;
      ric(l, j) = s;
    }
  return ric;
}

Mat ricci(const ChartMetric& g, const Vec& p) {
  const Riemann R = riemann(g, p);
  return ricci(R, g(p).inverse());
}

double scalar(const Mat& ric, const Mat& g_inv) { return (g_inv.cwiseProduct(ric)).sum(); }

double scalar(const ChartMetric& g, const Vec& p) {
  const Mat g_inv = g(p).inverse();
  return scalar(ricci(riemann(g, p), g_inv), g_inv);
}

Vec ricci_eigen_ratios(const Mat& ric, const Mat& g) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(ric, g, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// ---------------------------------------------------------------- scalar fields

ScalarJet scalar_jet(const ScalarField& f, const Vec& p, double h) {
  const int m = static_cast<int>(p.size());
  ScalarJet jet;
  jet.value = f(p);
  jet.d.resize(m);
  jet.dd.resize(m, m);
  std::vector<double> plus(m), minus(m);
  for (int i = 0; i < m; ++i) {
    Vec q = p;
    q[i] += h;
    plus[i] = f(q);
    q[i] = p[i] - h;
    minus[i] = f(q);
    jet.d[i] = (plus[i] - minus[i]) / (2.0 * h);
    jet.dd(i, i) = (plus[i] - 2.0 * jet.value + minus[i]) / (h * h);
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Vec q = p;
      q[i] += h;
      q[j] += h;
      const double pp = f(q);
      q[j] = p[j] - h;
      const double pm = f(q);
      q[i] = p[i] - h;
      const double mm = f(q);
      q[j] = p[j] + h;
      const double mp = f(q);
      jet.dd(i, j) = (pp - pm - mp + mm) / (4.0 * h * h);
      jet.dd(j, i) = jet.dd(i, j);
    }
  return jet;
}

namespace {

Mat covariant_hessian(const ScalarJet& jet, const Christoffel& G) {
  const int m = G.dim();
  Mat H = jet.dd;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) H(i, j) -= G(k, i, j) * jet.d[k];
  return 0.5 * (H + H.transpose());
}

}  // namespace

Mat hessian(const ChartMetric& g, const ScalarField& f, const Vec& p) {
  const Christoffel G = christoffel(g, p);
  return covariant_hessian(scalar_jet(f, p, g.fd_step()), G);
}

ChartMetric conformal_metric(const ChartMetric& h, const ScalarField& phi) {
  if (!(h.domain() == phi.domain)) {
    throw DomainMismatchError("conformal_metric: metric and conformal factor domains differ");
  }
  auto comps = [h, phi](const Vec& p) -> Mat { return std::exp(2.0 * phi(p)) * h(p); };
  return ChartMetric(h.domain(), comps, h.fd_step());
}

double conformal_sectional(const ChartMetric& h, const ScalarField& phi, const Vec& p,
                           const Vec& X, const Vec& Y, const Tolerances& tol) {
  if (!(h.domain() == phi.domain)) {
    throw DomainMismatchError("conformal_sectional: metric and conformal factor domains differ");
  }
  const Riemann R = riemann(h, p);
  const Mat g = h(p);
  const double xx = X.dot(g * X);
  const double yy = Y.dot(g * Y);
  const double xy = X.dot(g * Y);
  const double area2 = xx * yy - xy * xy;
  if (!(area2 >= tol.plane_tol)) {
    throw DegeneratePlaneError("conformal_sectional: |X ^ Y|^2 below plane tolerance");
  }
  const double sect_h = R.contract(X, Y) / area2;

  const ScalarJet jet = scalar_jet(phi, p, h.fd_step());
  const Mat H = covariant_hessian(jet, christoffel(h, p));
  const Vec grad = g.ldlt().solve(jet.d);
  const double grad2 = jet.d.dot(grad);
  const double xphi = jet.d.dot(X);
  const double yphi = jet.d.dot(Y);
  const Vec mixed = xphi * Y - yphi * X;

  const double A = 2.0 * xy * X.dot(H * Y) - yy * X.dot(H * X) - xx * Y.dot(H * Y) +
                   mixed.dot(g * mixed) - area2 * grad2;
  return std::exp(-2.0 * jet.value) * (sect_h + A / area2);
}

ConformalRicci conformal_ricci(const ChartMetric& h, const ScalarField& phi, const Vec& p) {
  if (!(h.domain() == phi.domain)) {
    throw DomainMismatchError("conformal_ricci: metric and conformal factor domains differ");
  }
  const int m = h.dim();
  const Mat g = h(p);
  const Mat g_inv = g.inverse();
  const Mat ric_h = ricci(riemann(h, p), g_inv);
  const ScalarJet jet = scalar_jet(phi, p, h.fd_step());
  const Mat H = covariant_hessian(jet, christoffel(h, p));
  const double lap = (g_inv * H).trace();
  const double grad2 = jet.d.dot(g_inv * jet.d);

  ConformalRicci out;
  out.ric = ric_h - (m - 2) * (H - jet.d * jet.d.transpose()) - (lap + (m - 2) * grad2) * g;
  const double w = std::exp(-2.0 * jet.value);
  out.eigen_ratios = w * ricci_eigen_ratios(out.ric, g);
  out.scalar = w * (g_inv * out.ric).trace();
  return out;
}

double curve_length(const ChartMetric& g, const std::function<Vec(double)>& path,
                    const std::function<Vec(double)>& velocity, double a, double b,
                    int panels) {
  using Quad = boost::math::quadrature::gauss<double, 10>;
  auto speed = [&](double t) {
    const Vec v = velocity(t);
    return std::sqrt(v.dot(g(path(t)) * v));
  };
  double total = 0.0;
  const double w = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    total += Quad::integrate(speed, a + i * w, a + (i + 1) * w);
  }
  return total;
}

}  // namespace collarext

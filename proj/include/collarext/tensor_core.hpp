#pragma once

// Chart-based Riemannian metrics and pointwise curvature.
//
// Curvature convention (used everywhere in the library):
//
//   R(X,Y)Z = D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z
//   K(X,Y)  = <R(X,Y)Y, X> / (|X|^2 |Y|^2 - <X,Y>^2)
//
// so round spheres have positive sectional curvature. The fully lowered
// tensor is stored as
//
//   R_ijkl = <R(d_i, d_j) d_l, d_k>
//
// which gives R_1212 = K |d_1 ^ d_2|^2 (for the round sphere of radius r in
// polar coordinates, R_1212 = r^2 sin^2 theta) and
//
//   K(X,Y) = R_ijkl X^i Y^j X^k Y^l / |X ^ Y|^2,
//   Ric_jl = g^ik R_ijkl,   Scal = g^jl Ric_jl.
//
// All derivatives of metric components are central finite differences with
// the metric's fd_step (default 1e-4 times the shortest side of the box).

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <vector>

namespace collarext {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Axis-aligned open box in R^m.
struct Box {
  Vec lower;
  Vec upper;

  Box() = default;
  Box(Vec lo, Vec hi);
  static Box cube(int dim, double half_width);

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vec& p) const;
  /// Smallest per-axis distance from p to a face (negative when outside).
  double clearance(const Vec& p) const;
  double shortest_side() const;
  Vec center() const { return 0.5 * (lower + upper); }
  /// Same box with every face moved inwards by `margin`.
  Box shrunk(double margin) const;
  bool operator==(const Box& other) const;
};

struct Tolerances {
  double num_tol = 1e-5;
  double plane_tol = 1e-10;
  double ode_tol = 1e-6;
};

/// Symmetric positive-definite matrix field over a coordinate box.
/// Immutable; copies share the component function.
class ChartMetric {
 public:
  using Components = std::function<Mat(const Vec&)>;

  /// fd_step <= 0 selects the default of 1e-4 * shortest box side.
  ChartMetric(Box domain, Components components, double fd_step = 0.0);

  int dim() const { return domain_.dim(); }
  const Box& domain() const { return domain_; }
  double fd_step() const { return fd_step_; }
  ChartMetric with_fd_step(double step) const;

  /// Symmetrized components at p. No definiteness check.
  Mat operator()(const Vec& p) const;
  /// Components at p; throws DefinitenessError if not SPD.
  Mat checked(const Vec& p) const;

 private:
  Box domain_;
  std::shared_ptr<const Components> components_;
  double fd_step_;
};

struct ScalarField {
  Box domain;
  std::function<double(const Vec&)> value;

  double operator()(const Vec& p) const { return value(p); }
};

struct TangentVector {
  Vec base;
  Vec comps;
};

/// Gamma^k_ij stored densely; symmetric in (i, j).
class Christoffel {
 public:
  explicit Christoffel(int dim) : m_(dim), data_(dim * dim * dim, 0.0) {}
  int dim() const { return m_; }
  double& operator()(int k, int i, int j) { return data_[(k * m_ + i) * m_ + j]; }
  double operator()(int k, int i, int j) const { return data_[(k * m_ + i) * m_ + j]; }
  double max_abs() const;

 private:
  int m_;
  std::vector<double> data_;
};

/// Fully lowered curvature tensor R_ijkl = <R(d_i,d_j) d_l, d_k>.
class Riemann {
 public:
  explicit Riemann(int dim) : m_(dim), data_(dim * dim * dim * dim, 0.0) {}
  int dim() const { return m_; }
  double& operator()(int i, int j, int k, int l) { return data_[((i * m_ + j) * m_ + k) * m_ + l]; }
  double operator()(int i, int j, int k, int l) const { return data_[((i * m_ + j) * m_ + k) * m_ + l]; }

  /// R(X, Y, X, Y) = <R(X,Y)Y, X>.
  double contract(const Vec& X, const Vec& Y) const;
  /// max over index tuples of |R_ijkl + R_jikl|, |R_ijkl + R_ijlk|,
  /// |R_ijkl - R_klij| and the first-Bianchi cyclic sum.
  double symmetry_residual() const;

 private:
  int m_;
  std::vector<double> data_;
};

/// Value, first and second coordinate derivatives of the metric at a point.
struct MetricJet {
  Mat g;
  Mat g_inv;
  std::vector<Mat> dg;   // dg[i] = d_i g
  std::vector<Mat> d2g;  // d2g[i*m + j] = d_i d_j g (only filled for order 2)
};

MetricJet metric_jet(const ChartMetric& g, const Vec& p, int order, double step);

Christoffel christoffel(const ChartMetric& g, const Vec& p);
Christoffel christoffel(const ChartMetric& g, const Vec& p, double step);
Riemann riemann(const ChartMetric& g, const Vec& p);

double sectional(const ChartMetric& g, const Vec& p, const Vec& X, const Vec& Y,
                 const Tolerances& tol = {});
double sectional(const ChartMetric& g, const TangentVector& X, const TangentVector& Y,
                 const Tolerances& tol = {});
/// Sectional curvature from an already computed tensor.
double sectional(const Riemann& R, const Mat& g, const Vec& X, const Vec& Y,
                 const Tolerances& tol = {});

Mat ricci(const ChartMetric& g, const Vec& p);
Mat ricci(const Riemann& R, const Mat& g_inv);
double scalar(const ChartMetric& g, const Vec& p);
double scalar(const Mat& ric, const Mat& g_inv);
/// Eigenvalues of g^{-1} Ric (the Ricci ratios Ric(X,X)/g(X,X) at critical X).
Vec ricci_eigen_ratios(const Mat& ric, const Mat& g);

/// Covariant Hessian of a scalar field with respect to g, and its gradient
/// one-form (coordinate derivatives).
struct ScalarJet {
  double value = 0.0;
  Vec d;   // d_i f
  Mat dd;  // d_i d_j f
};
ScalarJet scalar_jet(const ScalarField& f, const Vec& p, double step);
Mat hessian(const ChartMetric& g, const ScalarField& f, const Vec& p);

ChartMetric conformal_metric(const ChartMetric& h, const ScalarField& phi);

/// Sectional curvature of e^{2 phi} h through the conformal transformation
/// law, with every inner product, gradient and Hessian taken in h.
double conformal_sectional(const ChartMetric& h, const ScalarField& phi, const Vec& p,
                           const Vec& X, const Vec& Y, const Tolerances& tol = {});

struct ConformalRicci {
  Mat ric;           // Ricci tensor of e^{2 phi} h
  Vec eigen_ratios;  // eigenvalues of (e^{2 phi} h)^{-1} Ric, ascending
  double scalar = 0.0;
};

/// Ricci curvature of e^{2 phi} h through the conformal transformation law
///   Ric' = Ric - (m-2)(Hess phi - dphi dphi) - (Lap phi + (m-2)|dphi|^2) h
/// with derivatives of phi taken from phi itself, so small conformal factors
/// keep their relative accuracy.
ConformalRicci conformal_ricci(const ChartMetric& h, const ScalarField& phi, const Vec& p);

/// Length of t -> path(t), t in [a, b], by composite Gauss-Legendre
/// quadrature of sqrt(g(c', c')) with the velocity from `velocity`.
double curve_length(const ChartMetric& g, const std::function<Vec(double)>& path,
                    const std::function<Vec(double)>& velocity, double a, double b,
                    int panels = 64);

/// Random 2-plane spanned by a g-orthonormal pair, Gaussian-distributed in a
/// g-orthonormal frame (uniform on the Grassmannian).
template <class Rng>
std::pair<Vec, Vec> random_plane(const Mat& g, Rng& rng);

}  // namespace collarext

#include "collarext/detail/random_plane.hpp"

#pragma once

#include <random>
#include <utility>

namespace collarext {

template <class Rng>
std::pair<Vec, Vec> random_plane(const Mat& g, Rng& rng) {
  const auto m = g.rows();
  std::normal_distribution<double> normal(0.0, 1.0);
  // g = L L^T; a standard Gaussian z maps to X = L^{-T} z, which is Gaussian
  // with respect to the inner product g.
  const Eigen::LLT<Mat> llt(g);
  const auto Lt = llt.matrixU();
  for (;;) {
    Vec z1(m), z2(m);
    for (Eigen::Index i = 0; i < m; ++i) z1[i] = normal(rng);
    for (Eigen::Index i = 0; i < m; ++i) z2[i] = normal(rng);
    Vec X = Lt.solve(z1);
    Vec Y = Lt.solve(z2);
    const double xx = X.dot(g * X);
    if (xx < 1e-24) continue;
    X /= std::sqrt(xx);
    Y -= X.dot(g * Y) * X;
    const double yy = Y.dot(g * Y);
    if (yy < 1e-24) continue;
    Y /= std::sqrt(yy);
    return {X, Y};
  }
}

}  // namespace collarext

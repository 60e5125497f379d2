#include "krf/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace krf {

ChebyshevGrid::ChebyshevGrid(int N) : N_(N) {
  if (N < 2) throw std::invalid_argument("ChebyshevGrid: N must be at least 2");
  const int m = N + 1;
  x_.resize(m);
  theta_.resize(m);
  bary_.resize(m);
  std::vector<double> a(m);
  for (int j = 0; j < m; ++j) {
    a[j] = M_PI * j / (2.0 * N);
    const double s = std::sin(a[j]);
    x_(j) = s * s;
    theta_(j) = M_PI * j / N;
    bary_(j) = ((j % 2 == 0) ? 1.0 : -1.0) * ((j == 0 || j == N) ? 0.5 : 1.0);
  }
  x_(0) = 0.0;
  x_(N) = 1.0;

  D_.setZero(m, m);
  for (int i = 0; i < m; ++i) {
    double diag = 0.0;
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      // x_i − x_j = sin(a_i + a_j) sin(a_i − a_j), free of cancellation.
      const double dx = std::sin(a[i] + a[j]) * std::sin(a[i] - a[j]);
      D_(i, j) = (bary_(j) / bary_(i)) / dx;
      diag -= D_(i, j);
    }
    D_(i, i) = diag;
  }
  D2_ = D_ * D_;
  D3_ = D_ * D2_;
  D4_ = D2_ * D2_;

  cc_.resize(m);
  for (int j = 0; j < m; ++j) {
    double s = 1.0;
    for (int k = 1; k <= N / 2; ++k) {
      const double b = (2 * k == N) ? 1.0 : 2.0;
      s -= b * std::cos(2.0 * k * theta_(j)) / (4.0 * k * k - 1.0);
    }
    const double c = (j == 0 || j == N) ? 1.0 : 2.0;
    cc_(j) = 0.5 * c * s / N;
  }
}

Mat ChebyshevGrid::interpolation_matrix(const Vec& targets) const {
  const int m = size();
  Mat E = Mat::Zero(targets.size(), m);
  for (int r = 0; r < targets.size(); ++r) {
    const double t = targets(r);
    int exact = -1;
    for (int j = 0; j < m; ++j)
      if (t == x_(j)) exact = j;
    if (exact >= 0) {
      E(r, exact) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (int j = 0; j < m; ++j) {
      const double q = bary_(j) / (t - x_(j));
      E(r, j) = q;
      denom += q;
    }
    E.row(r) /= denom;
  }
  return E;
}

Vec ChebyshevGrid::interpolate(const Vec& values, const Vec& targets) const {
  return interpolation_matrix(targets) * values;
}

double ChebyshevGrid::interpolate(const Vec& values, double t) const {
  Vec tv(1);
  tv(0) = t;
  return interpolate(values, tv)(0);
}

std::pair<Vec, Vec> gauss_legendre(int m, double a, double b) {
  Mat J = Mat::Zero(m, m);
  for (int k = 1; k < m; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = beta;
    J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  Vec nodes(m), weights(m);
  for (int i = 0; i < m; ++i) {
    const double t = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    nodes(i) = a + 0.5 * (b - a) * (t + 1.0);
    weights(i) = (b - a) * v * v;
  }
  return {nodes, weights};
}

}  // namespace krf

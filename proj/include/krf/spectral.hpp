#pragma once

#include <Eigen/Dense>
#include <utility>

namespace krf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Chebyshev–Lobatto collocation on [0, 1] with N+1 nodes
// x_j = sin²(πj/2N), so x_0 = 0 and x_N = 1.
class ChebyshevGrid {
 public:
  explicit ChebyshevGrid(int N);

  int N() const { return N_; }
  int size() const { return N_ + 1; }
  const Vec& x() const { return x_; }
  // Angles θ_j = πj/N with x_j = (1 − cos θ_j)/2.
  const Vec& theta() const { return theta_; }
  const Mat& D() const { return D_; }
  const Mat& D2() const { return D2_; }
  const Mat& D3() const { return D3_; }
  const Mat& D4() const { return D4_; }
  // Clenshaw–Curtis weights on [0, 1].
  const Vec& cc_weights() const { return cc_; }

  Mat interpolation_matrix(const Vec& targets) const;
  Vec interpolate(const Vec& values, const Vec& targets) const;
  double interpolate(const Vec& values, double t) const;

 private:
  int N_;
  Vec x_, theta_, bary_, cc_;
  Mat D_, D2_, D3_, D4_;
};

// Gauss–Legendre nodes and weights on [a, b] (Golub–Welsch).
std::pair<Vec, Vec> gauss_legendre(int m, double a = 0.0, double b = 1.0);

}  // namespace krf

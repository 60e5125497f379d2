#include <cmath>

#include "doctest.h"
#include "krf/spectral.hpp"

using namespace krf;

TEST_CASE("Lobatto nodes span [0, 1]") {
  const ChebyshevGrid g(16);
  CHECK(g.size() == 17);
  CHECK(g.x()(0) == 0.0);
  CHECK(g.x()(16) == doctest::Approx(1.0).epsilon(1e-15));
  for (int j = 1; j <= 16; ++j) CHECK(g.x()(j) > g.x()(j - 1));
}

TEST_CASE("differentiation is exact on polynomials of degree <= N") {
  const ChebyshevGrid g(12);
  const Vec x = g.x();
  const Vec p = x.array().pow(7) - 3.0 * x.array().pow(4) + x.array();
  const Vec dp = 7.0 * x.array().pow(6) - 12.0 * x.array().pow(3) + 1.0;
  const Vec d2p = 42.0 * x.array().pow(5) - 36.0 * x.array().square();
  CHECK((g.D() * p - dp).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((g.D2() * p - d2p).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((g.D3() * p - g.D() * d2p).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("spectral convergence on an entire function") {
  double prev = 1.0;
  for (int N : {8, 16, 24}) {
    const ChebyshevGrid g(N);
    const Vec f = (2.0 * g.x().array()).exp();
    const double err = (g.D() * f - 2.0 * f).cwiseAbs().maxCoeff();
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-11);
}

TEST_CASE("Clenshaw-Curtis and Gauss-Legendre integrate polynomials") {
  const ChebyshevGrid g(20);
  const Vec f = g.x().array().pow(9);
  CHECK(g.cc_weights().dot(f) == doctest::Approx(0.1).epsilon(1e-14));
  const auto [xs, ws] = gauss_legendre(6, 0.0, 2.0);
  CHECK(ws.dot(xs.array().pow(11).matrix()) == doctest::Approx(std::pow(2.0, 12) / 12.0).epsilon(1e-13));
}

TEST_CASE("barycentric interpolation reproduces smooth data") {
  const ChebyshevGrid g(32);
  const Vec f = (3.0 * g.x().array()).sin();
  Vec t(5);
  t << 0.0, 0.123, 0.5, 0.77, 1.0;
  const Vec ft = g.interpolate(f, t);
  for (int i = 0; i < t.size(); ++i) CHECK(ft(i) == doctest::Approx(std::sin(3.0 * t(i))).epsilon(1e-13));
  CHECK(g.interpolate(f, 0.123) == doctest::Approx(std::sin(0.369)).epsilon(1e-13));
  const Mat P = g.interpolation_matrix(t);
  CHECK((P * f - ft).cwiseAbs().maxCoeff() < 1e-14);
}

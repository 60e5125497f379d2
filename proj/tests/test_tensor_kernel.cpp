#include <random>

#include "doctest.h"
#include "krf/error.hpp"
#include "krf/patches.hpp"

using namespace krf;

// Reference values come from tests/oracles/fs_curvature.py (sympy, 30 digits).

TEST_CASE("Fubini-Study on CP1 matches the symbolic oracle") {
  const MetricPatch fs = fubini_study_patch(1);
  struct Case {
    cplx z;
    double W, R;
  };
  for (const Case& c : {Case{0.0, 4.0, -4.0}, Case{cplx(0.3, 0.2), 3.1325867334951836, -2.4532749107175062}}) {
    CVector z(1);
    z(0) = c.z;
    const CurvatureBundle b = curvature_bundle(fs, z);
    CHECK(std::abs(fs.eval(z)(0, 0) - c.W) < 1e-14);
    CHECK(std::abs(b.ricci(0, 0) - c.W) < 1e-12);
    CHECK(b.scalar == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(std::abs(b.riemann(0, 0, 0, 0) - c.R) < 1e-12);
  }
}

TEST_CASE("Fubini-Study on CP2 matches the symbolic oracle") {
  CVector z(2);
  z << cplx(0.3, 0.2), cplx(-0.1, 0.4);
  const MetricPatch fs = fubini_study_patch(2);
  const CMatrix W = fs.eval(z);
  CHECK(std::abs(W(0, 0) - 4.1538461538461538) < 1e-13);
  CHECK(std::abs(W(0, 1) - cplx(-0.17751479289940828, -0.4970414201183432)) < 1e-13);
  CHECK(std::abs(W(1, 1) - 4.0118343195266272) < 1e-13);
  const CurvatureBundle b = curvature_bundle(fs, z);
  CHECK(b.scalar == doctest::Approx(4.0).epsilon(1e-12));
  CHECK((b.ricci - W).cwiseAbs().maxCoeff() < 1e-12);
  const Tensor4& R = b.riemann;
  CHECK(std::abs(R(0, 0, 0, 0) - (-2.8757396449704142)) < 1e-12);
  CHECK(std::abs(R(0, 0, 0, 1) - cplx(0.12289485662266727, 0.34410559854346837)) < 1e-12);
  CHECK(std::abs(R(0, 0, 1, 1) - (-1.4119253527537551)) < 1e-12);
  CHECK(std::abs(R(0, 1, 0, 1) - cplx(0.035923111935856588, -0.029410734918245159)) < 1e-12);
  CHECK(std::abs(R(1, 1, 0, 1) - cplx(0.11869332306291797, 0.33234130457617030)) < 1e-12);
  CHECK(std::abs(R(1, 1, 1, 1) - (-2.6824691012219460)) < 1e-12);
}

TEST_CASE("flat metric has vanishing curvature") {
  const MetricPatch flat = flat_patch(3, 1.0, 2.5);
  CVector z(3);
  z << cplx(0.1, 0.2), cplx(-0.3, 0.0), cplx(0.05, -0.4);
  const CurvatureBundle b = curvature_bundle(flat, z);
  CHECK(b.chern.max_abs() <= 1e-12);
  CHECK(b.riemann.max_abs() <= 1e-12);
  CHECK(std::abs(b.scalar) <= 1e-12);
}

TEST_CASE("Riemann symmetries hold on random Kahler patches") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-0.2, 0.2);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + trial % 3;
    const MetricPatch p = polynomial_kahler_patch(random_polynomial_potential(n, 0.3, rng()), 0.5);
    CVector z(n);
    for (int k = 0; k < n; ++k) z(k) = cplx(U(rng), U(rng));
    const CurvatureBundle b = curvature_bundle(p, z);
    CHECK(riemann_symmetry_defect(b.riemann) <= 1e-8);
    const double scale = std::max(1.0, b.ricci.cwiseAbs().maxCoeff());
    CHECK(hermitian_defect(b.ricci) <= 1e-12 * scale);
    CHECK((ricci_from_chern(b.chern) - b.ricci).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    // Scal = 2 tr(W⁻¹ Ric)
    CHECK(b.scalar == doctest::Approx(trace_against(p.eval(z).inverse(), b.ricci)).epsilon(1e-12));
  }
}

TEST_CASE("finite-difference derivatives agree with analytic jets") {
  const MetricPatch p = polynomial_kahler_patch(random_polynomial_potential(2, 0.3, 5), 0.5);
  const MetricPatch fd = finite_difference_copy(p);
  CHECK(fd.derivative_source() == DerivativeSource::finite_difference);
  CVector z(2);
  z << cplx(0.1, -0.05), cplx(0.02, 0.12);
  CHECK((ricci_form(p, z) - ricci_form(fd, z)).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(std::abs(scalar_curvature(p, z) - scalar_curvature(fd, z)) < 1e-6);
}

TEST_CASE("Chern coefficients reject non-Kahler metrics for Riemann") {
  const MetricPatch h = hermitian_non_kahler_patch(2, 0.5);
  CVector z(2);
  z << cplx(0.2, 0.1), cplx(-0.1, 0.05);
  CHECK_THROWS_AS(riemann_coefficients(h, z), NonKahlerError);
  const CurvatureBundle b = curvature_bundle(h, z);
  CHECK(b.riemann.data.empty());
  CHECK(b.chern.max_abs() > 1e-3);
}

TEST_CASE("lambda1 of Fubini-Study") {
  // Chern eigenvalue field on T⊗T: 1/2 on CP1 with W normalisation, 0 on CP2.
  CVector z1(1);
  z1(0) = cplx(0.3, 0.2);
  CHECK(bisectional_and_lambda1(fubini_study_patch(1), z1).lambda1 == doctest::Approx(0.5).epsilon(1e-12));
  CVector z2(2);
  z2 << cplx(0.3, 0.2), cplx(-0.1, 0.4);
  CHECK(std::abs(bisectional_and_lambda1(fubini_study_patch(2), z2).lambda1) < 1e-12);
}

TEST_CASE("bisectional curvature of Fubini-Study is positive") {
  const MetricPatch fs = fubini_study_patch(2);
  CVector z(2);
  z << cplx(0.1, 0.0), cplx(0.0, 0.2);
  const auto bl = bisectional_and_lambda1(fs, z);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> G;
  for (int i = 0; i < 20; ++i) {
    CVector xi(2), eta(2);
    xi << cplx(G(rng), G(rng)), cplx(G(rng), G(rng));
    eta << cplx(G(rng), G(rng)), cplx(G(rng), G(rng));
    CHECK(bl.bisectional(xi, eta) > 0.0);
  }
}

TEST_CASE("geodesic normal form reproduces curvature") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 1 + trial % 2;
    const MetricPatch p = polynomial_kahler_patch(random_polynomial_potential(n, 0.3, rng()), 0.5);
    CVector z = CVector::Zero(n);
    z(0) = cplx(0.05, 0.02);
    const NormalForm nf = geodesic_normal_form(p, z, 2);
    // Euclidean at the center
    const CMatrix W0 = nf.transformed.value();
    CHECK((W0 - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    // H2 = −2 R in the new coordinates
    const Tensor4 Rw = riemann_coefficients(center_data(nf.transformed));
    for (size_t i = 0; i < Rw.data.size(); ++i) CHECK(std::abs(nf.H2.data[i] + 2.0 * Rw.data[i]) < 1e-9);
    CHECK(nf.kahler_defect < 1e-10);
    // third-order remainder: residual/r³ stays bounded under halving
    const double a = normal_form_residual(p, nf, 0.04) / std::pow(0.04, 3);
    const double b = normal_form_residual(p, nf, 0.02) / std::pow(0.02, 3);
    CHECK(b <= 2.0 * a + 1e-9);
    const double v1 = volume_density_expansion_check(p, nf, 0.04);
    const double v2 = volume_density_expansion_check(p, nf, 0.02);
    CHECK(v2 <= 2.0 * v1 + 1e-9);
  }
}

TEST_CASE("evaluation outside the patch raises") {
  const MetricPatch fs = fubini_study_patch(1, 1.0);
  CVector z(1);
  z(0) = 3.0;
  CHECK_FALSE(fs.contains(z));
  CHECK_THROWS_AS(fs.eval(z), DomainError);
}

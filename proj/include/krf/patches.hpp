#pragma once

#include <cstdint>
#include <functional>

#include "krf/tensor_kernel.hpp"

namespace krf {

// Jet of a real Kähler potential Φ about z, order as requested; the metric
// is ω_{kl̄} = 2 ∂_k ∂̄_l Φ.
using PotentialJetFn = std::function<Jet(const CVector&, int)>;

MetricJet metric_jet_from_potential(const Jet& potential, int n);

MetricPatch potential_patch(int n, std::vector<double> radii, PotentialJetFn potential);

// ω_{kl̄} = scale · δ_{kl}.
MetricPatch flat_patch(int n, double radius, double scale = 1.0);

// Φ = (s/2) log(1 + |z|²); s = 2(n+1) puts ω in 2πc₁(CPⁿ).
MetricPatch fubini_study_patch(int n, double radius = 2.0, double s = 0.0);

// Φ = |z|²/2 + ε Σ c_{αβ} z^α z̄^β with Hermitian random coefficients on
// monomials of total degree 3 and 4.
struct PolynomialPotential {
  int n = 0;
  std::vector<std::vector<int>> exps;  // length 2n exponent vectors
  std::vector<cplx> coeffs;
};
PolynomialPotential random_polynomial_potential(int n, double eps, std::uint64_t seed);
Jet polynomial_potential_jet(const PolynomialPotential& p, const CVector& z, int order);
MetricPatch polynomial_kahler_patch(const PolynomialPotential& p, double radius);

// Same metric with derivatives replaced by finite differences.
MetricPatch finite_difference_copy(const MetricPatch& patch);

// A Hermitian but non-Kähler metric (ω = I + diag(|z_1|², ...) with an
// off-diagonal z̄_1 term); derivatives by finite differences.
MetricPatch hermitian_non_kahler_patch(int n, double radius);

}  // namespace krf

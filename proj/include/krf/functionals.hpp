#pragma once

#include "krf/geometry.hpp"

namespace krf {

struct AubinValues {
  double I = 0.0, J = 0.0;
  double I_dirichlet = 0.0;  // Σ_k ⨍ i∂φ∧∂̄φ∧ωᵏ∧ω_φ^{n−k−1}
  double J_potential = 0.0;  // ⨍φωⁿ − (1/(n+1)) Σ_k ⨍φ ωᵏ∧ω_φ^{n−k}
  double I_defect() const { return std::abs(I - I_dirichlet); }
  double J_defect() const { return std::abs(J - J_potential); }
};

// ωᵏ∧ω_φ^{n−k}/ωⁿ on the grid.
Vec mixed_volume(const MetricData& md, int k);

AubinValues aubin_I_J(const MetricData& md);

// Mabuchi K-energy relative to the reference metric.
double k_energy(const MetricData& md);
// −½ ⨍ v (Scal − 2n) ω_φⁿ: derivative of ν along φ + s v at s = 0.
double k_energy_derivative(const MetricData& md, const Vec& v);

// ν(φ) − [⨍u ω_φⁿ + J(φ) − ⨍(φ + c) ωⁿ + ⨍h ωⁿ] for a flow snapshot.
double k_energy_flow_identity(const MetricData& md, const Vec& u, double c);

// ⨍ [½(|∇u|² + Scal) + u − 2n] e^{−u} ω_φⁿ.
double perelman_W(const MetricData& md, const Vec& u);
// sup |Δu − (2n − Scal)|, zero when u is the flow Ricci potential.
double ricci_potential_identity_residual(const MetricData& md, const Vec& u);

struct BochnerKodaira {
  double hessian_term = 0.0;    // ∫ |∂̄∇^{1,0}u|² e^h ω_φⁿ
  double laplacian_term = 0.0;  // −∫ ⟨∂Δ_{ω,h}u, ∂u⟩ e^h ω_φⁿ
  double ricci_term = 0.0;      // −∫ (Ric − i∂∂̄h)(∇u, J∇u) e^h ω_φⁿ
  double residual() const { return std::abs(hessian_term - laplacian_term - ricci_term); }
};
BochnerKodaira bochner_kodaira(const MetricData& md, const Vec& u, const Vec& h);
double bochner_kodaira_residual(const MetricData& md, const Vec& u, const Vec& h);

struct EigenResult {
  double lambda1 = 0.0;
  Vec eigenfunction;  // nodal values, weighted-mean zero, unit weighted L²
  double constant_mode = 0.0;  // the dropped eigenvalue (0 to roundoff)
};
// Smallest nonzero eigenvalue of −Δ_{ω,h} on invariant functions.
EigenResult first_eigenvalue(const MetricData& md, const Vec& h);

// ∫|∂φ|² e^h ω_φⁿ − [∫φ² e^h ω_φⁿ − (1/V_h)(∫φ e^h ω_φⁿ)²].
double poincare_residual(const MetricData& md, const Vec& h, const Vec& phi);

// −2 ⨍ |∇u_s|² ω_φⁿ at the metric's own Ricci potential u_s,
// ω − Ric(ω) = 2i∂∂̄u_s.
double futaki_pairing(const MetricData& md);
double futaki_pairing(const MetricData& md, const ScalarField& soliton_potential);

struct FunctionalRecord {
  double t = 0.0;
  double I = 0.0, J = 0.0, nu = 0.0, W = 0.0, a = 0.0;
  double lambda1 = 0.0, futaki = 0.0, bochner_residual = 0.0;
};

}  // namespace krf

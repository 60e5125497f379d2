#pragma once

#include <vector>

#include "krf/flow.hpp"
#include "krf/grid_kernels.hpp"

namespace krf {

struct PerelmanBounds {
  double sup_u = 0.0;
  double sup_grad_u = 0.0;  // sup |∇u|
  double sup_lap_u = 0.0;
  double sup_scal = 0.0;
  double diam = 0.0;
};
PerelmanBounds perelman_monitor(const FlowState& s);

struct DensityRatio {
  double min = 0.0;            // min ω_tⁿ/ωⁿ on the grid
  double min_algebraic = 0.0;  // exp min (u − φ̂ + h_ω), φ̂ = φ + c
  double relative_disagreement() const { return std::abs(min - min_algebraic) / min; }
};
DensityRatio density_ratio(const FlowState& s);

struct YauTerms {
  Vec lhs;          // 2 Tr_ω Ric(ω_φ)
  Vec laplacian;    // −Δ_φ Δ_ω φ
  Vec curvature;    // 4λ₁(2n + Δ_ω φ) Tr_φ ω
  Vec gradient;     // 2|∂Δ_ω φ|²_φ / (2n + Δ_ω φ)
  Vec residual;     // lhs − (laplacian + curvature + gradient)
  Vec trace;        // 2n + Δ_ω φ
  Vec c3;           // |∇^{1,0}_ω ∂∂̄φ|²_{ω,φ}
  // 2|∇^{1,0}∂∂̄φ|²_{ω,φ} − |∂Δ_ω φ|²_φ/(2n + Δ_ω φ), the Cauchy–Schwarz step
  Vec cauchy_schwarz;
};
// λ₁ is the reference's Chern eigenvalue field; pass it to reuse across calls.
YauTerms yau_c2_terms(const MetricData& md, const Vec& lambda1, Execution exec = Execution::parallel);
YauTerms yau_c2_terms(const MetricData& md, Execution exec = Execution::parallel);
double yau_c2_residual(const MetricData& md, const Vec& lambda1);
double yau_c2_residual(const MetricData& md);

// sup over the grid of |∇^{1,0}_ω ∂∂̄φ|²_{ω,φ}.
double c3_norm(const MetricData& md, Execution exec = Execution::parallel);

struct OscillationLp {
  double osc = 0.0;      // max − min of φ̂
  double lp_norm = 0.0;  // (∫ f^{1+ε} ωⁿ)^{1/(1+ε)}
  double eps = 0.5, delta = 0.5;
  double lp_norm_delta() const { return std::pow(lp_norm, delta); }
};
OscillationLp oscillation_and_lp(const MetricData& md, double c = 0.0, double eps = 0.5, double delta = 0.5);

struct ThetaMoments {
  std::vector<double> moments;    // ⨍ θᵖ ω_tⁿ, p = 1..P
  std::vector<double> residuals;  // n(p+1)²/(4p) ⨍θᵖ − ⨍|∂θ^{(p+1)/2}|², p = 1..P
  std::vector<double> relative_residuals;  // residuals over the right-hand side
  std::vector<double> ratios;     // m_{p+1} / ((p+1) m_p), p = 1..P−1
  double min_residual() const;
};
// θ = max φ − φ; moments accumulate in the log domain.
ThetaMoments theta_moment_chain(const MetricData& md, int P = 12);

struct MonitorRecord {
  double t = 0.0;
  PerelmanBounds perelman;
  double density_min = 0.0;
  double c2_trace = 0.0;      // max of 2n + Δ_ω φ
  double c2_trace_min = 0.0;  // must stay positive
  double c2_residual = 0.0;
  double cs_residual = 0.0;
  double c3_norm = 0.0;
  OscillationLp osc;
  ThetaMoments theta;
};
MonitorRecord monitor(const FlowState& s, const Vec& lambda1, Execution exec = Execution::parallel);

}  // namespace krf

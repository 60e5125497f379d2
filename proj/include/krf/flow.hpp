#pragma once

#include <functional>
#include <string>
#include <vector>

#include "krf/functionals.hpp"

namespace krf {

enum class Scheme { semi_implicit, rk4 };

// Snapshot of the normalized flow φ̇ = log(ω_φⁿ/ωⁿ) + φ + c − h_ω.
struct FlowState {
  double t = 0.0;
  KahlerPotential phi;
  ScalarField u;  // φ̇, Ric(ω_t) − ω_t = −i∂∂̄u
  double c = 0.0;
  double a = 0.0;  // −⨍u e^{−u} ω_tⁿ
  MetricData metric;
  double step_size = 0.0;
};

// c = log ⨍ e^{−(log f + φ − h_ω)} ω_φⁿ, evaluated with a max shift.
double normalization_constant(const MetricData& md);
double normalization_constant(const GeometryPtr& geom, const Vec& phi);
// |⨍ e^{−u} ω_φⁿ − 1|.
double normalization_defect(const FlowState& s);
// sup |u − (log f + φ + c − h_ω)|.
double flow_equation_defect(const FlowState& s);

FlowState make_state(const GeometryPtr& geom, const Vec& phi, double t = 0.0);

struct StepResult {
  FlowState state;   // two half steps, accepted
  FlowState coarse;  // one full step, used for the error estimate
};
// Throws StabilityError when a stage is non-finite or inadmissible, and
// AdmissibilityError when only the accepted state leaves the cone.
StepResult step(const FlowState& s, double dt, Scheme scheme);
FlowState single_step(const FlowState& s, double dt, Scheme scheme);

struct RicciConstants {
  double a = 0.0;
  double W = 0.0;
};
RicciConstants ricci_potential_constants(const FlowState& s);
// |W + a + n|.
double ricci_constants_defect(const FlowState& s);

// sup |½(Δ₁u₁ + Δ₂u₂) − 2(u₂ − u₁)/dt + (u₁ + u₂) + (a₁ + a₂)|: the
// midpoint form of Δu − 2∂_t u + 2u + 2a = 0.
double evolution_identity_residual(const FlowState& s1, const FlowState& s2);

// sup |∇^{1,0}∂u_s|² with u_s = u/2 the soliton-convention potential.
double soliton_residual(const FlowState& s);

struct NewtonOptions {
  double tolerance = 1e-10;
  int max_iterations = 50;
  int max_halvings = 30;
};
struct NewtonResult {
  KahlerPotential phi;
  std::vector<double> residuals;  // sup |F| per iterate
  int iterations = 0;
};
// Solves log(ω_φⁿ/ωⁿ) + φ − h_ω = 0 with a bordered gauge against the
// holomorphy-potential direction.
NewtonResult newton_ke_solve(const GeometryPtr& geom, const Vec& phi0, const NewtonOptions& opt = {});

enum class Termination { converged_KE, converged_soliton, horizon_reached, admissibility_lost, stability_failure };
const char* to_string(Termination t);

struct FlowOptions {
  Scheme scheme = Scheme::semi_implicit;
  double dt = 0.05;
  double t_max = 20.0;
  double convergence_tol = 1e-8;
  int convergence_window = 10;
  bool stop_on_convergence = true;
  int snapshot_stride = 1;
};

// Per-step scalars on the accepted state with step-doubling error estimates.
struct StepRecord {
  double t = 0.0;
  double nu = 0.0, W = 0.0, a = 0.0;
  double nu_err = 0.0, W_err = 0.0, a_err = 0.0;
  double ke_residual = 0.0;
  double soliton_residual = 0.0;
  double normalization_defect = 0.0;
};

struct FlowRun {
  FlowOptions options;
  std::vector<FlowState> snapshots;
  std::vector<StepRecord> steps;  // steps[0] describes the initial state
  Termination termination = Termination::horizon_reached;
  std::string message;
};

using SnapshotCallback = std::function<void(const FlowState&)>;

FlowRun run(const GeometryPtr& geom, const Vec& phi0, const FlowOptions& opt, const SnapshotCallback& on_snapshot = {});

// Monotonicity of ν (non-increasing), W (non-decreasing) and a
// (non-increasing) across consecutive steps, with tolerance
// 10·estimate + 1e-13(1 + |Q|).
struct MonotonicityReport {
  bool nu_ok = true, W_ok = true, a_ok = true;
  double nu_worst = 0.0, W_worst = 0.0, a_worst = 0.0;  // largest violation margin (≤ 0 is fine)
};
MonotonicityReport check_monotonicity(const std::vector<StepRecord>& steps);

}  // namespace krf

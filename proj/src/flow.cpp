#include "krf/flow.hpp"

#include <cmath>
#include <sstream>

#include "krf/error.hpp"

namespace krf {

namespace {

bool all_finite(const Vec& v) { return v.allFinite(); }

Vec exponent_G(const MetricData& md) { return md.logf + md.phi - md.geom->h_ref(); }

// Jacobian of φ ↦ u(φ): ½Δ_φ + I − 1⊗w with w = e^{−u} ω_φⁿ-mean weights.
Mat flow_jacobian(const FlowState& s) {
  const MetricData& md = s.metric;
  const int m = md.geom->size();
  const Vec w = (md.mean_w.array() * (-s.u.values.array()).exp()).matrix();
  Mat J = 0.5 * md.lap;
  J.diagonal().array() += 1.0;
  J -= Vec::Ones(m) * w.transpose();
  return J;
}

FlowState stage_state(const GeometryPtr& geom, const Vec& phi, double t, const char* what) {
  if (!all_finite(phi)) throw StabilityError(std::string(what) + " produced non-finite values");
  try {
    return make_state(geom, phi, t);
  } catch (const AdmissibilityError& e) {
    throw StabilityError(std::string(what) + " left the admissible cone: " + e.what());
  }
}

FlowState accepted_state(const GeometryPtr& geom, const Vec& phi, double t) {
  if (!all_finite(phi)) throw StabilityError("step produced non-finite values");
  return make_state(geom, phi, t);
}

}  // namespace

double normalization_constant(const MetricData& md) {
  // ⨍ e^{−G} ω_φⁿ = ⨍ e^{h−φ} ωⁿ; the shifted form keeps the exponent ≤ 0.
  const Vec e = -exponent_G(md);
  const double shift = e.maxCoeff();
  const double mean = md.mean_w.dot((e.array() - shift).exp().matrix());
  return shift + std::log(mean);
}

double normalization_constant(const GeometryPtr& geom, const Vec& phi) {
  return normalization_constant(metric_from_potential({geom, phi}));
}

FlowState make_state(const GeometryPtr& geom, const Vec& phi, double t) {
  FlowState s;
  s.t = t;
  s.phi = {geom, phi};
  s.metric = metric_from_potential(s.phi);
  s.c = normalization_constant(s.metric);
  s.u.values = (exponent_G(s.metric).array() + s.c).matrix();
  s.u.role = FieldRole::flow_ricci_potential;
  s.a = -mean_integral(s.metric, s.u.values, Vec((-s.u.values.array()).exp()));
  return s;
}

double normalization_defect(const FlowState& s) {
  return std::abs(mean_integral(s.metric, Vec((-s.u.values.array()).exp())) - 1.0);
}

double flow_equation_defect(const FlowState& s) {
  const Vec r = s.u.values - (s.metric.logf + s.phi.values + Vec::Constant(s.u.values.size(), s.c) -
                              s.metric.geom->h_ref());
  return r.cwiseAbs().maxCoeff();
}

FlowState single_step(const FlowState& s, double dt, Scheme scheme) {
  const GeometryPtr& g = s.metric.geom;
  const Vec& y = s.phi.values;
  Vec next;
  if (scheme == Scheme::semi_implicit) {
    // ROS2, γ = 1 + 1/√2.
    const double gamma = 1.0 + 1.0 / std::sqrt(2.0);
    Mat A = -gamma * dt * flow_jacobian(s);
    A.diagonal().array() += 1.0;
    const Eigen::PartialPivLU<Mat> lu(A);
    const Vec k1 = lu.solve(s.u.values);
    const FlowState s1 = stage_state(g, y + dt * k1, s.t + dt, "Rosenbrock stage");
    const Vec k2 = lu.solve(s1.u.values - 2.0 * k1);
    next = y + dt * (1.5 * k1 + 0.5 * k2);
  } else {
    const Vec k1 = s.u.values;
    const Vec k2 = stage_state(g, y + 0.5 * dt * k1, s.t, "RK4 stage").u.values;
    const Vec k3 = stage_state(g, y + 0.5 * dt * k2, s.t, "RK4 stage").u.values;
    const Vec k4 = stage_state(g, y + dt * k3, s.t, "RK4 stage").u.values;
    next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  FlowState out = accepted_state(g, next, s.t + dt);
  out.step_size = dt;
  return out;
}

StepResult step(const FlowState& s, double dt, Scheme scheme) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step size must be positive");
  StepResult r;
  FlowState half;
  try {
    r.coarse = single_step(s, dt, scheme);
    half = single_step(s, 0.5 * dt, scheme);
  } catch (const AdmissibilityError& e) {
    throw StabilityError(std::string("intermediate step left the admissible cone: ") + e.what());
  }
  r.state = single_step(half, 0.5 * dt, scheme);
  r.state.t = s.t + dt;
  r.state.step_size = dt;
  return r;
}

RicciConstants ricci_potential_constants(const FlowState& s) {
  RicciConstants rc;
  rc.a = s.a;
  rc.W = perelman_W(s.metric, s.u.values);
  return rc;
}

double ricci_constants_defect(const FlowState& s) {
  const RicciConstants rc = ricci_potential_constants(s);
  return std::abs(rc.W + rc.a + s.metric.n());
}

double evolution_identity_residual(const FlowState& s1, const FlowState& s2) {
  const double dt = s2.t - s1.t;
  if (!(dt > 0.0)) throw std::invalid_argument("snapshots must be in increasing time order");
  const Vec& u1 = s1.u.values;
  const Vec& u2 = s2.u.values;
  const Vec r = 0.5 * (laplacian(s1.metric, u1) + laplacian(s2.metric, u2)) - (2.0 / dt) * (u2 - u1) + (u1 + u2) +
                Vec::Constant(u1.size(), s1.a + s2.a);
  return r.cwiseAbs().maxCoeff();
}

double soliton_residual(const FlowState& s) {
  const ScalarField us = convert_ricci_potential(s.u, FieldRole::soliton_potential);
  return hessian20_norm(s.metric, us.values).maxCoeff();
}

NewtonResult newton_ke_solve(const GeometryPtr& geom, const Vec& phi0, const NewtonOptions& opt) {
  const int m = geom->size();
  auto residual = [&](const MetricData& md) -> Vec { return md.logf + md.phi - geom->h_ref(); };
  NewtonResult out;
  Vec phi = phi0;
  MetricData md = metric_from_potential({geom, phi});
  Vec F = residual(md);
  double res = F.cwiseAbs().maxCoeff();
  out.residuals.push_back(res);
  while (res > opt.tolerance) {
    if (out.iterations >= opt.max_iterations)
      throw SolverError("Newton iteration did not converge", out.residuals);
    // [½Δ_φ + I, k; (w∘k)ᵀ, 0], k the holomorphy potential m_φ − ⨍m_φ.
    Mat B = Mat::Zero(m + 1, m + 1);
    B.topLeftCorner(m, m) = 0.5 * md.lap;
    B.topLeftCorner(m, m).diagonal().array() += 1.0;
    const Vec k = (md.m.array() - mean_integral(md, md.m)).matrix();
    B.block(0, m, m, 1) = k;
    B.block(m, 0, 1, m) = (md.mean_w.array() * k.array()).matrix().transpose();
    Vec rhs = Vec::Zero(m + 1);
    rhs.head(m) = -F;
    const Vec sol = Eigen::PartialPivLU<Mat>(B).solve(rhs);
    const Vec delta = sol.head(m);
    if (!delta.allFinite()) throw SolverError("Newton linear solve failed", out.residuals);

    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opt.max_halvings; ++h, lambda *= 0.5) {
      const Vec trial = phi + lambda * delta;
      try {
        MetricData tm = metric_from_potential({geom, trial});
        const Vec tF = residual(tm);
        const double tres = tF.cwiseAbs().maxCoeff();
        if (std::isfinite(tres) && tres < res) {
          phi = trial;
          md = std::move(tm);
          F = tF;
          res = tres;
          accepted = true;
          break;
        }
      } catch (const AdmissibilityError&) {
      }
    }
    ++out.iterations;
    out.residuals.push_back(res);
    if (!accepted) throw SolverError("Newton line search failed to reduce the residual", out.residuals);
  }
  out.phi = {geom, phi};
  return out;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged_KE: return "converged_KE";
    case Termination::converged_soliton: return "converged_soliton";
    case Termination::horizon_reached: return "horizon_reached";
    case Termination::admissibility_lost: return "admissibility_lost";
    case Termination::stability_failure: return "stability_failure";
  }
  return "unknown";
}

namespace {

StepRecord record_for(const FlowState& s) {
  StepRecord r;
  r.t = s.t;
  r.nu = k_energy(s.metric);
  r.a = s.a;
  r.W = perelman_W(s.metric, s.u.values);
  r.ke_residual = s.metric.ke_residual;
  r.soliton_residual = soliton_residual(s);
  r.normalization_defect = normalization_defect(s);
  return r;
}

}  // namespace

FlowRun run(const GeometryPtr& geom, const Vec& phi0, const FlowOptions& opt, const SnapshotCallback& on_snapshot) {
  if (!(opt.dt > 0.0) || !(opt.t_max > 0.0)) throw std::invalid_argument("dt and t_max must be positive");
  FlowRun fr;
  fr.options = opt;
  FlowState s = make_state(geom, phi0, 0.0);
  fr.steps.push_back(record_for(s));
  fr.snapshots.push_back(s);
  if (on_snapshot) on_snapshot(s);

  const long nsteps = std::lround(std::ceil(opt.t_max / opt.dt - 1e-9));
  int below = fr.steps.back().ke_residual <= opt.convergence_tol ? 1 : 0;
  constexpr double p_factor = 3.0;  // 2^p − 1 for p = 2
  const double order_factor = opt.scheme == Scheme::rk4 ? 15.0 : p_factor;
  for (long k = 1; k <= nsteps; ++k) {
    StepResult sr;
    try {
      sr = step(s, opt.dt, opt.scheme);
    } catch (const StabilityError& e) {
      fr.termination = Termination::stability_failure;
      fr.message = e.what();
      return fr;
    } catch (const AdmissibilityError& e) {
      fr.termination = Termination::admissibility_lost;
      fr.message = e.what();
      return fr;
    }
    s = std::move(sr.state);
    s.t = k * opt.dt;
    StepRecord rec = record_for(s);
    const StepRecord coarse = record_for(sr.coarse);
    rec.nu_err = std::abs(rec.nu - coarse.nu) / order_factor;
    rec.W_err = std::abs(rec.W - coarse.W) / order_factor;
    rec.a_err = std::abs(rec.a - coarse.a) / order_factor;
    fr.steps.push_back(rec);
    if (k % opt.snapshot_stride == 0 || k == nsteps) {
      fr.snapshots.push_back(s);
      if (on_snapshot) on_snapshot(s);
    }
    below = rec.ke_residual <= opt.convergence_tol ? below + 1 : 0;
    if (opt.stop_on_convergence && below >= opt.convergence_window) break;
  }
  const StepRecord& last = fr.steps.back();
  if (below >= opt.convergence_window)
    fr.termination = Termination::converged_KE;
  else if (last.soliton_residual <= opt.convergence_tol)
    fr.termination = Termination::converged_soliton;
  else
    fr.termination = Termination::horizon_reached;
  if (fr.snapshots.back().t != s.t) {
    fr.snapshots.push_back(s);
    if (on_snapshot) on_snapshot(s);
  }
  return fr;
}

MonotonicityReport check_monotonicity(const std::vector<StepRecord>& steps) {
  MonotonicityReport r;
  r.nu_worst = r.W_worst = r.a_worst = -INFINITY;
  for (size_t i = 1; i < steps.size(); ++i) {
    const StepRecord& p = steps[i - 1];
    const StepRecord& q = steps[i];
    auto tol = [](double err, double v) { return 10.0 * err + 1e-13 * (1.0 + std::abs(v)); };
    const double dn = (q.nu - p.nu) - tol(q.nu_err, q.nu);
    const double dW = (p.W - q.W) - tol(q.W_err, q.W);
    const double da = (q.a - p.a) - tol(q.a_err, q.a);
    r.nu_worst = std::max(r.nu_worst, dn);
    r.W_worst = std::max(r.W_worst, dW);
    r.a_worst = std::max(r.a_worst, da);
  }
  if (steps.size() < 2) r.nu_worst = r.W_worst = r.a_worst = 0.0;
  r.nu_ok = r.nu_worst <= 0.0;
  r.W_ok = r.W_worst <= 0.0;
  r.a_ok = r.a_worst <= 0.0;
  return r;
}

}  // namespace krf

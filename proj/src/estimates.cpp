#include "krf/estimates.hpp"

#include <algorithm>
#include <cmath>

namespace krf {

PerelmanBounds perelman_monitor(const FlowState& s) {
  const MetricData& md = s.metric;
  const Vec& u = s.u.values;
  PerelmanBounds b;
  b.sup_u = u.cwiseAbs().maxCoeff();
  b.sup_grad_u = std::sqrt(std::max(0.0, gradient_norms(md, u).grad2.maxCoeff()));
  b.sup_lap_u = laplacian(md, u).cwiseAbs().maxCoeff();
  b.sup_scal = md.scal.cwiseAbs().maxCoeff();
  b.diam = diameter(md);
  return b;
}

DensityRatio density_ratio(const FlowState& s) {
  const MetricData& md = s.metric;
  DensityRatio d;
  d.min = md.f.minCoeff();
  // log(ω_tⁿ/ωⁿ) = u − φ̂ + h_ω
  const Vec logf = s.u.values - s.phi.values - Vec::Constant(md.f.size(), s.c) + md.geom->h_ref();
  d.min_algebraic = std::exp(logf.minCoeff());
  return d;
}

YauTerms yau_c2_terms(const MetricData& md, const Vec& lambda1, Execution exec) {
  const int n = md.n();
  YauTerms y;
  y.lhs = 4.0 * ((n - 1) * md.tau_ric + md.r_ric);
  const Vec lap_phi = 2.0 * ((n - 1) * (md.tau.array() - 1.0) + (md.r.array() - 1.0)).matrix();
  y.trace = (2.0 * n + lap_phi.array()).matrix();
  y.laplacian = -laplacian(md, lap_phi);
  // Tr_φ ω = Σ_l 1/(1 + 2φ_{ll̄}) in a frame diagonalizing both metrics.
  const Vec tr_phi = ((n - 1) / md.tau.array() + 1.0 / md.r.array()).matrix();
  y.curvature = (4.0 * lambda1.array() * y.trace.array() * tr_phi.array()).matrix();
  const Vec g2 = gradient_pairing(md, lap_phi, lap_phi);
  y.gradient = (2.0 * g2.array() / y.trace.array()).matrix();
  y.residual = y.lhs - (y.laplacian + y.curvature + y.gradient);
  y.c3 = c3_field(md.geom, md.phi, exec);
  y.cauchy_schwarz = 2.0 * y.c3 - (g2.array() / y.trace.array()).matrix();
  return y;
}

YauTerms yau_c2_terms(const MetricData& md, Execution exec) {
  return yau_c2_terms(md, reference_lambda1_field(md.geom, exec), exec);
}

double yau_c2_residual(const MetricData& md, const Vec& lambda1) {
  return yau_c2_terms(md, lambda1).residual.minCoeff();
}

double yau_c2_residual(const MetricData& md) { return yau_c2_terms(md).residual.minCoeff(); }

double c3_norm(const MetricData& md, Execution exec) { return c3_field(md.geom, md.phi, exec).maxCoeff(); }

OscillationLp oscillation_and_lp(const MetricData& md, double c, double eps, double delta) {
  OscillationLp o;
  o.eps = eps;
  o.delta = delta;
  const Vec phat = (md.phi.array() + c).matrix();
  o.osc = phat.maxCoeff() - phat.minCoeff();
  const Vec fp = md.f.array().pow(1.0 + eps);
  o.lp_norm = std::pow(md.geom->volume() * md.geom->mean_weights().dot(fp), 1.0 / (1.0 + eps));
  return o;
}

double ThetaMoments::min_residual() const {
  double m = INFINITY;
  for (double r : residuals) m = std::min(m, r);
  return m;
}

ThetaMoments theta_moment_chain(const MetricData& md, int P) {
  const int n = md.n();
  ThetaMoments out;
  const Vec theta = (md.phi.maxCoeff() - md.phi.array()).matrix();
  const double tmax = theta.maxCoeff();
  if (!(tmax > 0.0)) {
    out.moments.assign(P, 0.0);
    out.residuals.assign(P, 0.0);
    out.relative_residuals.assign(P, 0.0);
    out.ratios.assign(std::max(0, P - 1), 0.0);
    return out;
  }
  // θ = tmax·ϑ with ϑ ∈ [0, 1]; log m_p = p log tmax + log ⨍ϑᵖ.
  const Vec vt = theta / tmax;
  const Vec dvt2 = gradient_norms(md, vt).dbar2;
  const double log_tmax = std::log(tmax);
  std::vector<double> log_m(P + 1);
  for (int p = 1; p <= P; ++p) {
    const double mv = mean_integral(md, vt.array().pow(p).matrix());
    log_m[p] = p * log_tmax + std::log(mv);
    const double moment = std::exp(log_m[p]);
    // ⨍|∂θ^{(p+1)/2}|² = ((p+1)/2)² tmax^{p+1} ⨍ ϑ^{p−1}|∂ϑ|²
    const Vec w = vt.array().pow(p - 1);
    const double dv = mean_integral(md, (w.array() * dvt2.array()).matrix());
    const double dir = std::exp((p + 1) * log_tmax) * 0.25 * (p + 1.0) * (p + 1.0) * dv;
    const double rhs = n * (p + 1.0) * (p + 1.0) / (4.0 * p) * moment;
    out.moments.push_back(moment);
    out.residuals.push_back(rhs - dir);
    out.relative_residuals.push_back(rhs > 0.0 ? (rhs - dir) / rhs : 0.0);
  }
  for (int p = 1; p < P; ++p) out.ratios.push_back(std::exp(log_m[p + 1] - log_m[p]) / (p + 1.0));
  return out;
}

MonitorRecord monitor(const FlowState& s, const Vec& lambda1, Execution exec) {
  MonitorRecord r;
  r.t = s.t;
  r.perelman = perelman_monitor(s);
  r.density_min = density_ratio(s).min;
  const YauTerms y = yau_c2_terms(s.metric, lambda1, exec);
  r.c2_trace = y.trace.maxCoeff();
  r.c2_trace_min = y.trace.minCoeff();
  r.c2_residual = y.residual.minCoeff();
  r.cs_residual = y.cauchy_schwarz.minCoeff();
  r.c3_norm = y.c3.maxCoeff();
  r.osc = oscillation_and_lp(s.metric, s.c);
  r.theta = theta_moment_chain(s.metric);
  return r;
}

}  // namespace krf

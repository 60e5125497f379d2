#include "krf/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "krf/error.hpp"

namespace krf {

namespace {

Vec ref_dirichlet(const MetricData& md, const Vec& phi) {
  // n · i∂φ∧∂̄φ∧ω^{n−1}/ωⁿ = |∂φ|²_ω
  const Vec& x = md.x();
  const Vec d = md.geom->grid().D() * phi;
  return (x.array() * (1.0 - x.array()) * d.array().square() / (0.5 * md.s())).matrix();
}

double mean_ref(const MetricData& md, const Vec& u) { return md.geom->mean_weights().dot(u); }

}  // namespace

Vec mixed_volume(const MetricData& md, int k) {
  const int n = md.n();
  if (k < 0 || k > n) throw std::invalid_argument("mixed volume index out of range");
  const Vec& tau = md.tau;
  const Vec& r = md.r;
  Vec out(tau.size());
  for (int j = 0; j < tau.size(); ++j) {
    double v = k * std::pow(tau(j), n - k);
    if (n - k > 0) v += (n - k) * r(j) * std::pow(tau(j), n - k - 1);
    out(j) = v / n;
  }
  return out;
}

AubinValues aubin_I_J(const MetricData& md) {
  const int n = md.n();
  const Vec& phi = md.phi;
  const Vec g = ref_dirichlet(md, phi);
  AubinValues v;
  v.I = mean_ref(md, (phi.array() * (1.0 - md.f.array())).matrix());
  for (int k = 0; k < n; ++k) {
    // n · i∂φ∧∂̄φ∧ωᵏ∧ω_φ^{n−k−1}/ωⁿ = |∂φ|²_ω τ^{n−1−k}
    const Vec term = (g.array() * md.tau.array().pow(n - 1 - k)).matrix() / n;
    const double m = mean_ref(md, term);
    v.I_dirichlet += m;
    v.J += (k + 1.0) / (n + 1.0) * m;
  }
  double mix = 0.0;
  for (int k = 0; k <= n; ++k) mix += mean_ref(md, (phi.array() * mixed_volume(md, k).array()).matrix());
  v.J_potential = mean_ref(md, phi) - mix / (n + 1.0);
  return v;
}

double k_energy(const MetricData& md) {
  const int n = md.n();
  const Vec& h = md.geom->h_ref();
  double mix = 0.0;
  for (int k = 0; k <= n; ++k) mix += mean_ref(md, (md.phi.array() * mixed_volume(md, k).array()).matrix());
  return mean_integral(md, md.logf + md.phi - h) - mix / (n + 1.0) + mean_ref(md, h);
}

double k_energy_derivative(const MetricData& md, const Vec& v) {
  const Vec s = md.scal - Vec::Constant(md.scal.size(), 2.0 * md.n());
  return -0.5 * mean_integral(md, v, s);
}

double k_energy_flow_identity(const MetricData& md, const Vec& u, double c) {
  const Vec& h = md.geom->h_ref();
  const AubinValues aj = aubin_I_J(md);
  const double rhs = mean_integral(md, u) + aj.J - mean_ref(md, (md.phi.array() + c).matrix()) + mean_ref(md, h);
  return std::abs(k_energy(md) - rhs);
}

double perelman_W(const MetricData& md, const Vec& u) {
  const GradientNorms g = gradient_norms(md, u);
  const Vec integrand =
      (0.5 * (g.grad2 + md.scal).array() + u.array() - 2.0 * md.n()) * (-u.array()).exp();
  return mean_integral(md, integrand);
}

double ricci_potential_identity_residual(const MetricData& md, const Vec& u) {
  const Vec r = laplacian(md, u) - (Vec::Constant(u.size(), 2.0 * md.n()) - md.scal);
  return r.cwiseAbs().maxCoeff();
}

BochnerKodaira bochner_kodaira(const MetricData& md, const Vec& u, const Vec& h) {
  const double V = md.geom->volume();
  const Vec eh = h.array().exp();
  BochnerKodaira bk;
  bk.hessian_term = V * mean_integral(md, hessian20_norm(md, u), eh);
  const Vec lh = weighted_laplacian(md, h, u);
  bk.laplacian_term = -V * mean_integral(md, gradient_pairing(md, lh, u), eh);
  // ∇u is radial, so (Ric − i∂∂̄h)(∇u, J∇u) is the radial eigenvalue of
  // Ric − i∂∂̄h against ω_φ times |∇u|²_φ.
  const Vec rad = ((md.r_ric - (2.0 / md.s()) * (md.geom->R_op() * h)).array() / md.r.array()).matrix();
  const Vec g2 = gradient_norms(md, u).grad2;
  bk.ricci_term = -V * mean_integral(md, (rad.array() * g2.array()).matrix(), eh);
  return bk;
}

double bochner_kodaira_residual(const MetricData& md, const Vec& u, const Vec& h) {
  return bochner_kodaira(md, u, h).residual();
}

EigenResult first_eigenvalue(const MetricData& md, const Vec& h) {
  const GeometryPtr& g = md.geom;
  const int n = md.n();
  const int N = g->N();
  const auto [xq, wq] = gauss_legendre(2 * N + 8);
  const Mat E = g->grid().interpolation_matrix(xq);
  const Mat ED = E * g->grid().D();
  const Vec fq = E * md.f;
  const Vec rq = E * md.r;
  const Vec hq = E * h;
  Vec wm(xq.size()), wk(xq.size());
  for (int i = 0; i < xq.size(); ++i) {
    const double x = xq(i);
    const double vol = wq(i) * std::exp(hq(i)) * fq(i) * n * std::pow(x, n - 1);
    wm(i) = vol;
    wk(i) = vol * 2.0 * x * (1.0 - x) / (0.5 * md.s() * rq(i));
  }
  const Mat M = E.transpose() * wm.asDiagonal() * E;
  const Mat K = ED.transpose() * wk.asDiagonal() * ED;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(0.5 * (K + K.transpose()), 0.5 * (M + M.transpose()));
  if (es.info() != Eigen::Success) throw SolverError("weighted Laplacian eigensolve failed", {});
  EigenResult out;
  out.constant_mode = es.eigenvalues()(0);
  out.lambda1 = es.eigenvalues()(1);
  out.eigenfunction = es.eigenvectors().col(1);
  return out;
}

double poincare_residual(const MetricData& md, const Vec& h, const Vec& phi) {
  const double V = md.geom->volume();
  const Vec eh = h.array().exp();
  const double dir = V * mean_integral(md, gradient_norms(md, phi).dbar2, eh);
  const double l2 = V * mean_integral(md, phi.cwiseProduct(phi), eh);
  const double m1 = V * mean_integral(md, phi, eh);
  const double Vh = V * mean_integral(md, Vec::Ones(phi.size()), eh);
  return dir - (l2 - m1 * m1 / Vh);
}

double futaki_pairing(const MetricData& md, const ScalarField& soliton_potential) {
  const ScalarField us = convert_ricci_potential(soliton_potential, FieldRole::soliton_potential);
  return -2.0 * mean_integral(md, gradient_norms(md, us.values).grad2);
}

double futaki_pairing(const MetricData& md) { return futaki_pairing(md, ricci_potential(md).h); }

}  // namespace krf

#include "krf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "krf/error.hpp"

namespace krf {

SymmetricGeometry::SymmetricGeometry(int n, int N)
    : n_(n), s_(2.0 * (n + 1)), V_(std::pow(2.0 * M_PI * (n + 1), n)), grid_(N) {
  if (n < 1) throw std::invalid_argument("complex dimension must be at least 1");
  if (N < 16) throw std::invalid_argument("collocation size N must be at least 16");
  const Vec& x = grid_.x();
  const int m = grid_.size();
  mean_w_.resize(m);
  for (int j = 0; j < m; ++j) mean_w_(j) = grid_.cc_weights()(j) * n * std::pow(x(j), n - 1);
  ref_profile_ = 0.5 * s_ * x;
  h_ref_ = Vec::Zero(m);
  const Vec xx = x.array() * (1.0 - x.array());
  T_ = (1.0 - x.array()).matrix().asDiagonal() * grid_.D();
  // Expanded form; D·diag(x(1−x))·D aliases and acquires a spurious kernel.
  R_ = (1.0 - 2.0 * x.array()).matrix().asDiagonal() * grid_.D();
  R_ += xx.asDiagonal() * grid_.D2();
}

GeometryPtr fubini_study(int n, int N) {
  auto g = std::make_shared<SymmetricGeometry>(n, N);
  const MetricData md = reference_metric(g);
  g->h_ref_ = ricci_potential(md).h.values;
  return g;
}

namespace {

void check_finite(const Vec& v, const char* what) {
  for (int j = 0; j < v.size(); ++j)
    if (!std::isfinite(v(j))) throw AdmissibilityError(std::string(what) + " is not finite", j, NAN);
}

}  // namespace

double min_relative_eigenvalue(const GeometryPtr& geom, const Vec& phi) {
  const double k = 2.0 / geom->s();
  const Vec r = Vec::Ones(phi.size()) + k * (geom->R_op() * phi);
  double lo = r.minCoeff();
  if (geom->n() >= 2) lo = std::min(lo, (Vec::Ones(phi.size()) + k * (geom->T_op() * phi)).minCoeff());
  return lo;
}

MetricData metric_from_potential(const KahlerPotential& pot) {
  const GeometryPtr& g = pot.geom;
  const int n = g->n();
  const int m = g->size();
  const double s = g->s();
  const Vec& x = g->x();
  if (pot.values.size() != m) throw std::invalid_argument("potential size does not match the grid");
  check_finite(pot.values, "potential");

  MetricData md;
  md.geom = g;
  md.phi = pot.values;
  md.dphi = g->grid().D() * md.phi;
  md.tau = Vec::Ones(m) + (2.0 / s) * (g->T_op() * md.phi);
  md.r = Vec::Ones(m) + (2.0 / s) * (g->R_op() * md.phi);
  for (int j = 0; j < m; ++j) {
    const bool bad = !(md.r(j) > 0.0) || (n >= 2 && !(md.tau(j) > 0.0));
    if (bad) {
      std::ostringstream os;
      os << "potential is not admissible at grid node " << j << " (x = " << x(j)
         << ", radial " << md.r(j) << ", tangential " << md.tau(j) << ")";
      throw AdmissibilityError(os.str(), j, x(j));
    }
  }
  md.logf = md.r.array().log();
  if (n >= 2) md.logf += (n - 1) * md.tau.array().log().matrix();
  md.f = md.logf.array().exp();
  md.m = 0.5 * s * x + (x.array() * (1.0 - x.array()) * md.dphi.array()).matrix();
  md.mprime = 0.5 * s * md.r;
  md.tau_ric = Vec::Ones(m) - (2.0 / s) * (g->T_op() * md.logf);
  md.r_ric = Vec::Ones(m) - (2.0 / s) * (g->R_op() * md.logf);
  md.scal = 2.0 * (md.r_ric.array() / md.r.array()).matrix();
  if (n >= 2) md.scal += 2.0 * (n - 1) * (md.tau_ric.array() / md.tau.array()).matrix();
  md.mean_w = (g->mean_weights().array() * md.f.array()).matrix();

  const Vec inv_r = md.r.cwiseInverse();
  md.lap = (4.0 / s) * (inv_r.asDiagonal() * g->R_op());
  if (n >= 2) md.lap += (4.0 / s) * (n - 1) * (md.tau.cwiseInverse().asDiagonal() * g->T_op());

  double ke = ((md.r_ric.array() / md.r.array()) - 1.0).abs().maxCoeff();
  if (n >= 2) ke = std::max(ke, ((md.tau_ric.array() / md.tau.array()) - 1.0).abs().maxCoeff());
  md.ke_residual = ke;
  return md;
}

MetricData reference_metric(const GeometryPtr& geom) {
  return metric_from_potential({geom, Vec::Zero(geom->size())});
}

Vec laplacian(const MetricData& md, const Vec& u) { return md.lap * u; }

Mat weighted_laplacian_matrix(const MetricData& md, const Vec& h) {
  const Vec& x = md.x();
  const Vec dh = md.geom->grid().D() * h;
  const Vec c = (2.0 * x.array() * (1.0 - x.array()) * dh.array() / md.mprime.array()).matrix();
  return md.lap + c.asDiagonal() * md.geom->grid().D();
}

Vec weighted_laplacian(const MetricData& md, const Vec& h, const Vec& u) {
  return weighted_laplacian_matrix(md, h) * u;
}

Vec gradient_pairing(const MetricData& md, const Vec& a, const Vec& b) {
  const Mat& D = md.geom->grid().D();
  const Vec& x = md.x();
  const Vec da = D * a, db = D * b;
  return (x.array() * (1.0 - x.array()) * da.array() * db.array() / md.mprime.array()).matrix();
}

GradientNorms gradient_norms(const MetricData& md, const Vec& u) {
  GradientNorms g;
  g.dbar2 = gradient_pairing(md, u, u);
  g.grad2 = 2.0 * g.dbar2;
  return g;
}

Vec hessian20_norm(const MetricData& md, const Vec& u) {
  const Mat& D = md.geom->grid().D();
  const Vec& x = md.x();
  const Vec q = ((D * u).array() / md.mprime.array()).matrix();
  const Vec dq = D * q;
  const Vec xx = x.array() * (1.0 - x.array());
  return (2.0 * xx.array().square() * dq.array().square()).matrix();
}

RicciPotentialResult ricci_potential(const MetricData& md, double initial_constant) {
  const int m = md.geom->size();
  const int n = md.n();
  // Bordered system [Δ 1; wᵀ 0][h; λ] = [Scal − 2n; 0].
  Mat A = Mat::Zero(m + 1, m + 1);
  A.topLeftCorner(m, m) = md.lap;
  A.block(0, m, m, 1).setOnes();
  A.block(m, 0, 1, m) = md.mean_w.transpose();
  Vec rhs(m + 1);
  rhs.head(m) = md.scal - Vec::Constant(m, 2.0 * n);
  rhs(m) = 0.0;
  Eigen::PartialPivLU<Mat> lu(A);
  const Vec sol = lu.solve(rhs);
  RicciPotentialResult out;
  out.linear_residual = (A * sol - rhs).cwiseAbs().maxCoeff();
  if (!std::isfinite(out.linear_residual) || out.linear_residual > 1e-6 * (1.0 + rhs.cwiseAbs().maxCoeff()))
    throw SolverError("Ricci potential solve failed", {out.linear_residual});
  Vec h = sol.head(m);

  // Additive constant: safeguarded Newton on c ↦ ⨍e^{h+c} − 1.
  const double shift = h.maxCoeff();
  const double A0 = md.mean_w.dot((h.array() - shift).exp().matrix());
  // c is the constant added to h − max h.
  double c = initial_constant + shift;
  std::vector<double> history;
  bool done = false;
  for (int it = 0; it < 200; ++it) {
    const double g = A0 * std::exp(c) - 1.0;
    history.push_back(g);
    double step = g / (A0 * std::exp(c));
    step = std::clamp(step, -50.0, 50.0);
    c -= step;
    out.constant_iterations = it + 1;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(c))) {
      done = true;
      break;
    }
  }
  if (!done) throw SolverError("Ricci potential normalization did not converge", history);
  out.h.values = (h.array() + (c - shift)).matrix();
  out.h.role = FieldRole::ricci_potential;
  return out;
}

ScalarField convert_ricci_potential(const ScalarField& f, FieldRole target) {
  // Each convention as a multiple of h.
  auto factor = [](FieldRole r) {
    switch (r) {
      case FieldRole::ricci_potential: return 1.0;
      case FieldRole::flow_ricci_potential: return -1.0;
      case FieldRole::soliton_potential: return -0.5;
      default: throw std::invalid_argument("field does not carry a Ricci potential convention");
    }
  };
  ScalarField out;
  out.values = (factor(target) / factor(f.role)) * f.values;
  out.role = target;
  return out;
}

double ricci_ddbar_residual(const MetricData& md, const Vec& h) {
  const double k = 2.0 / md.s();
  const Vec rr = k * (md.geom->R_op() * h) - (md.r_ric - md.r);
  double res = rr.cwiseAbs().maxCoeff();
  if (md.n() >= 2) {
    const Vec tt = k * (md.geom->T_op() * h) - (md.tau_ric - md.tau);
    res = std::max(res, tt.cwiseAbs().maxCoeff());
  }
  return res;
}

double mean_integral(const MetricData& md, const Vec& u, const std::optional<Vec>& weight) {
  if (weight) return md.mean_w.dot((u.array() * weight->array()).matrix());
  return md.mean_w.dot(u);
}

double mean_reference(const SymmetricGeometry& g, const Vec& u) { return g.mean_weights().dot(u); }

double diameter(const MetricData& md) {
  const int N = md.geom->N();
  const Vec v = (0.5 * md.mprime.array()).sqrt().matrix();
  double acc = 0.5 * (v(0) + v(N));
  for (int j = 1; j < N; ++j) acc += v(j);
  return acc * M_PI / N;
}

}  // namespace krf

#include "krf/grid_kernels.hpp"

#include <exception>

#include "krf/patches.hpp"

namespace krf {

namespace {

template <class F>
Vec for_each_node(int m, Execution exec, F&& f) {
  Vec out(m);
  std::exception_ptr err;
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
      try {
        out(j) = f(j);
      } catch (...) {
#pragma omp critical(krf_grid_error)
        if (!err) err = std::current_exception();
      }
    }
  } else {
    for (int j = 0; j < m; ++j) out(j) = f(j);
  }
  if (err) std::rethrow_exception(err);
  return out;
}

Jet fs_potential(int n, double s, const CVector& z, int order) {
  auto sp = JetSpace::get(2 * n, order);
  Jet rho(sp);
  for (int k = 0; k < n; ++k)
    rho += Jet::variable(sp, k, z(k)) * Jet::variable(sp, n + k, std::conj(z(k)));
  return 0.5 * s * log(rho + cplx(1.0));
}

}  // namespace

Vec reference_lambda1_field(const GeometryPtr& geom, Execution exec) {
  const int n = geom->n();
  const double s = geom->s();
  return for_each_node(geom->size(), exec, [&](int j) {
    const double x = geom->x()(j);
    const Chart chart = chart_for(x);
    const CVector z = chart_point(n, x, chart);
    const MetricJet mj = metric_jet_from_potential(fs_potential(n, s, z, 4), n);
    const CenterData c = center_data(mj);
    return lambda1(c, chern_coefficients(c));
  });
}

Vec tensor_scalar_field(const GeometryPtr& geom, const Vec& phi, Execution exec) {
  const int n = geom->n();
  const double s = geom->s();
  const ProfileJet pj(geom, phi, 4);
  return for_each_node(geom->size(), exec, [&](int j) {
    const double x = geom->x()(j);
    const Chart chart = chart_for(x);
    const CVector z = chart_point(n, x, chart);
    const Jet pot = fs_potential(n, s, z, 4) + profile_potential_jet(pj, z, 4, chart, j);
    const MetricJet mj = metric_jet_from_potential(pot, n);
    const CenterData c = center_data(mj);
    return trace_against(c.Winv, ricci_from_chern(chern_coefficients(c)));
  });
}

Vec c3_field(const GeometryPtr& geom, const Vec& phi, Execution exec) {
  const int n = geom->n();
  const double s = geom->s();
  const ProfileJet pj(geom, phi, 3);
  return for_each_node(geom->size(), exec, [&](int j) {
    const double x = geom->x()(j);
    const Chart chart = chart_for(x);
    const CVector z = chart_point(n, x, chart);
    const MetricJet ref = metric_jet_from_potential(fs_potential(n, s, z, 3), n);
    const MetricJet dd = metric_jet_from_potential(profile_potential_jet(pj, z, 3, chart, j), n);
    return c3_norm_at(ref, dd);
  });
}

double c3_norm_at(const MetricJet& ref, const MetricJet& ddbar_phi) {
  const int n = ref.n;
  const CenterData c = center_data(ref);
  const CMatrix P = 0.5 * ddbar_phi.value();  // φ_{kl̄}
  const CMatrix Wphi = c.W + ddbar_phi.value();
  const CMatrix Wphi_inv = Wphi.inverse();
  // α(p)(k,l) = α_{pkl̄}
  std::vector<CMatrix> alpha(n);
  for (int p = 0; p < n; ++p) {
    const CMatrix dP = 0.5 * ddbar_phi.partial({p}, {});
    alpha[p] = dP - c.d[p] * c.Winv * P;
  }
  cplx acc = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const cplx wpq = c.Winv(q, p);
      if (wpq == cplx(0.0)) continue;
      // Σ_{j,k,l,m} Wφ⁻¹(l,j) Wφ⁻¹(k,m) α_p(j,k) conj(α_q(l,m))
      const CMatrix t = Wphi_inv * alpha[p] * Wphi_inv;
      acc += wpq * (t.array() * alpha[q].conjugate().array()).sum();
    }
  return 8.0 * acc.real();
}

}  // namespace krf

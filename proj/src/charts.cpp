#include "krf/charts.hpp"

#include <algorithm>
#include <cmath>

#include "krf/patches.hpp"

namespace krf {

ProfileJet::ProfileJet(const GeometryPtr& geom, const Vec& phi, int kmax) : geom_(geom) {
  derivs_.push_back(phi);
  for (int k = 1; k <= kmax; ++k) derivs_.push_back(geom->grid().D() * derivs_.back());
}

double ProfileJet::derivative(int k, double x) const {
  const Vec& xs = geom_->x();
  for (int j = 0; j < xs.size(); ++j)
    if (xs(j) == x) return derivs_[k](j);
  return geom_->grid().interpolate(derivs_[k], x);
}

std::vector<cplx> ProfileJet::taylor(double x, int order) const {
  std::vector<cplx> out(order + 1, cplx(0.0));
  double fact = 1.0;
  for (int k = 0; k <= std::min(order, kmax()); ++k) {
    if (k > 0) fact *= k;
    out[k] = derivative(k, x) / fact;
  }
  return out;
}

std::vector<cplx> ProfileJet::taylor_at_node(int j, int order) const {
  std::vector<cplx> out(order + 1, cplx(0.0));
  double fact = 1.0;
  for (int k = 0; k <= std::min(order, kmax()); ++k) {
    if (k > 0) fact *= k;
    out[k] = derivs_[k](j) / fact;
  }
  return out;
}

Chart chart_for(double x) { return x <= 0.5 ? Chart::A : Chart::B; }

CVector chart_point(int n, double x, Chart chart) {
  CVector z = CVector::Zero(n);
  if (chart == Chart::A)
    z(0) = std::sqrt(x / (1.0 - x));
  else
    z(0) = std::sqrt((1.0 - x) / x);
  return z;
}

Jet moment_jet(const CVector& z, int order, Chart chart) {
  const int n = static_cast<int>(z.size());
  auto sp = JetSpace::get(2 * n, order);
  Jet rho(sp);
  for (int k = 0; k < n; ++k)
    rho += Jet::variable(sp, k, z(k)) * Jet::variable(sp, n + k, std::conj(z(k)));
  const Jet inv = inverse(rho + cplx(1.0));
  if (chart == Chart::A) return Jet::constant(sp, 1.0) - inv;
  const Jet first = Jet::variable(sp, 0, z(0)) * Jet::variable(sp, n, std::conj(z(0)));
  return Jet::constant(sp, 1.0) - first * inv;
}

Jet profile_potential_jet(const ProfileJet& phi, const CVector& z, int order, Chart chart, int node) {
  const Jet x = moment_jet(z, order, chart);
  if (node >= 0) return x.compose(phi.taylor_at_node(node, order));
  const double x0 = std::clamp(x.value().real(), 0.0, 1.0);
  return x.compose(phi.taylor(x0, order));
}

MetricPatch invariant_patch(const GeometryPtr& geom, std::shared_ptr<const ProfileJet> phi, Chart chart) {
  const int n = geom->n();
  const double s = geom->s();
  auto pot = [n, s, phi, chart](const CVector& z, int order) {
    auto sp = JetSpace::get(2 * n, order);
    Jet rho(sp);
    for (int k = 0; k < n; ++k)
      rho += Jet::variable(sp, k, z(k)) * Jet::variable(sp, n + k, std::conj(z(k)));
    Jet total = 0.5 * s * log(rho + cplx(1.0));
    if (phi) total += profile_potential_jet(*phi, z, order, chart);
    return total;
  };
  return potential_patch(n, std::vector<double>(n, 2.5), pot);
}

}  // namespace krf

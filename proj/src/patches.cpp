#include "krf/patches.hpp"

#include <random>
#include <stdexcept>

namespace krf {

MetricJet metric_jet_from_potential(const Jet& potential, int n) {
  const int order = potential.space().order() - 2;
  if (order < 0) throw std::invalid_argument("potential jet must have order ≥ 2");
  MetricJet out;
  out.n = n;
  out.entries.reserve(static_cast<size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    const Jet dk = potential.diff(k);
    for (int l = 0; l < n; ++l) out.entries.push_back((2.0 * dk.diff(n + l)).truncated(order));
  }
  return out;
}

MetricPatch potential_patch(int n, std::vector<double> radii, PotentialJetFn potential) {
  auto eval = [n, potential](const CVector& z) -> CMatrix {
    return metric_jet_from_potential(potential(z, 2), n).value();
  };
  auto jet = [n, potential](const CVector& z, int order) {
    return metric_jet_from_potential(potential(z, order + 2), n);
  };
  return MetricPatch(n, std::move(radii), true, eval, jet);
}

MetricPatch flat_patch(int n, double radius, double scale) {
  auto eval = [n, scale](const CVector&) -> CMatrix {
    return CMatrix::Identity(n, n) * cplx(scale);
  };
  auto jet = [n, scale](const CVector&, int order) {
    auto sp = JetSpace::get(2 * n, order);
    MetricJet j;
    j.n = n;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) j.entries.push_back(Jet::constant(sp, k == l ? scale : 0.0));
    return j;
  };
  return MetricPatch(n, std::vector<double>(n, radius), true, eval, jet);
}

namespace {

Jet rho_jet(const CVector& z, int order) {
  const int n = static_cast<int>(z.size());
  auto sp = JetSpace::get(2 * n, order);
  Jet rho(sp);
  for (int k = 0; k < n; ++k)
    rho += Jet::variable(sp, k, z(k)) * Jet::variable(sp, n + k, std::conj(z(k)));
  return rho;
}

}  // namespace

MetricPatch fubini_study_patch(int n, double radius, double s) {
  if (s <= 0.0) s = 2.0 * (n + 1);
  auto pot = [s](const CVector& z, int order) {
    Jet one_plus = rho_jet(z, order) + cplx(1.0);
    return 0.5 * s * log(one_plus);
  };
  return potential_patch(n, std::vector<double>(n, radius), pot);
}

PolynomialPotential random_polynomial_potential(int n, double eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolynomialPotential p;
  p.n = n;
  auto sp = JetSpace::get(2 * n, 4);
  std::vector<int> coeff_index(sp->size(), -1);
  for (int i = 0; i < sp->size(); ++i) {
    const int d = sp->degree(i);
    if (d < 3) continue;
    const auto& e = sp->exponents(i);
    int holo = 0, anti = 0;
    for (int v = 0; v < n; ++v) {
      holo += e[v];
      anti += e[n + v];
    }
    if (holo == 0 || anti == 0) continue;  // pluriharmonic terms do not change ω
    std::vector<int> sw(2 * n);
    for (int v = 0; v < n; ++v) {
      sw[v] = e[n + v];
      sw[n + v] = e[v];
    }
    const int j = sp->index(sw);
    if (coeff_index[j] >= 0) {
      p.exps.push_back(e);
      p.coeffs.push_back(std::conj(p.coeffs[coeff_index[j]]));
      continue;
    }
    cplx c = eps * cplx(u(rng), u(rng));
    if (j == i) c = cplx(c.real(), 0.0);
    coeff_index[i] = static_cast<int>(p.coeffs.size());
    p.exps.push_back(e);
    p.coeffs.push_back(c);
  }
  return p;
}

Jet polynomial_potential_jet(const PolynomialPotential& p, const CVector& z, int order) {
  const int n = p.n;
  auto sp = JetSpace::get(2 * n, order);
  std::vector<Jet> vars;
  for (int k = 0; k < n; ++k) vars.push_back(Jet::variable(sp, k, z(k)));
  for (int k = 0; k < n; ++k) vars.push_back(Jet::variable(sp, n + k, std::conj(z(k))));
  Jet phi = 0.5 * rho_jet(z, order);
  for (size_t t = 0; t < p.exps.size(); ++t) {
    Jet term = Jet::constant(sp, p.coeffs[t]);
    for (int v = 0; v < 2 * n; ++v)
      for (int r = 0; r < p.exps[t][v]; ++r) term = term * vars[v];
    phi += term;
  }
  return phi;
}

MetricPatch polynomial_kahler_patch(const PolynomialPotential& p, double radius) {
  auto pot = [p](const CVector& z, int order) { return polynomial_potential_jet(p, z, order); };
  return potential_patch(p.n, std::vector<double>(p.n, radius), pot);
}

MetricPatch finite_difference_copy(const MetricPatch& patch) {
  auto eval = [patch](const CVector& z) -> CMatrix { return patch.eval(z); };
  return MetricPatch(patch.n(), patch.radii(), patch.kahler(), eval);
}

MetricPatch hermitian_non_kahler_patch(int n, double radius) {
  if (n < 2) throw std::invalid_argument("every Hermitian metric in dimension 1 is Kähler");
  auto eval = [n](const CVector& z) -> CMatrix {
    CMatrix W = CMatrix::Identity(n, n);
    W(0, 0) += std::norm(z(1));
    W(0, 1) += 0.3 * std::conj(z(0));
    W(1, 0) += 0.3 * z(0);
    return W;
  };
  return MetricPatch(n, std::vector<double>(n, radius), false, eval);
}

}  // namespace krf

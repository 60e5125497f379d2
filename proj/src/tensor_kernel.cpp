#include "krf/tensor_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <Eigen/Eigenvalues>

#include "krf/error.hpp"

namespace krf {

namespace {

constexpr double kMaxCondition = 1e12;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::vector<int> exps_of(int n, const std::vector<int>& holo, const std::vector<int>& anti) {
  std::vector<int> e(2 * n, 0);
  for (int j : holo) ++e[j];
  for (int k : anti) ++e[n + k];
  return e;
}

// Hermitian part, positivity and conditioning of a metric coefficient matrix.
void check_metric(const CMatrix& W) {
  const CMatrix H = 0.5 * (W + W.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) throw SingularMetricError("metric is not positive definite");
  if (hi / lo > kMaxCondition) throw SingularMetricError("metric condition number exceeds 1e12");
}

}  // namespace

double Tensor4::max_abs() const {
  double m = 0.0;
  for (const auto& v : data) m = std::max(m, std::abs(v));
  return m;
}

CMatrix MetricJet::value() const {
  CMatrix m(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) m(k, l) = at(k, l).value();
  return m;
}

CMatrix MetricJet::partial(const std::vector<int>& holo, const std::vector<int>& anti) const {
  const auto e = exps_of(n, holo, anti);
  CMatrix m(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) m(k, l) = at(k, l).partial(e);
  return m;
}

MetricPatch::MetricPatch(int n, std::vector<double> radii, bool kahler, EvalFn eval, JetFn jet)
    : n_(n),
      radii_(std::move(radii)),
      kahler_(kahler),
      source_(jet ? DerivativeSource::analytic : DerivativeSource::finite_difference),
      eval_(std::move(eval)),
      jet_(std::move(jet)) {
  if (n_ < 1 || static_cast<int>(radii_.size()) != n_)
    throw std::invalid_argument("MetricPatch: radii must have n entries");
  if (!eval_) throw std::invalid_argument("MetricPatch: eval is required");
}

bool MetricPatch::contains(const CVector& z) const {
  if (z.size() != n_) return false;
  for (int k = 0; k < n_; ++k)
    if (!(std::abs(z(k)) < radii_[k])) return false;
  return true;
}

CMatrix MetricPatch::eval(const CVector& z) const {
  if (!contains(z)) throw DomainError("chart point outside the patch domain");
  return eval_(z);
}

MetricJet MetricPatch::jet(const CVector& z, int order) const {
  if (!contains(z)) throw DomainError("chart point outside the patch domain");
  if (jet_) return jet_(z, order);
  return fd_jet(z, order);
}

std::vector<CMatrix> MetricPatch::derivs(const CVector& z, int degree) const {
  const MetricJet j = jet(z, degree);
  const auto& sp = j.at(0, 0).space();
  std::vector<CMatrix> out;
  for (int i = 0; i < sp.size(); ++i) {
    if (sp.degree(i) != degree) continue;
    CMatrix m(n_, n_);
    for (int k = 0; k < n_; ++k)
      for (int l = 0; l < n_; ++l) m(k, l) = j.at(k, l).partial(sp.exponents(i));
    out.push_back(m);
  }
  return out;
}

MetricJet MetricPatch::fd_jet(const CVector& z, int order) const {
  if (order > 3) throw std::invalid_argument("finite-difference jets are limited to order 3");
  const double h = *std::min_element(radii_.begin(), radii_.end()) * 1e-2;
  static const double w6[6] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 3.0 / 4, -3.0 / 20, 1.0 / 60};
  static const int off[6] = {-3, -2, -1, 1, 2, 3};
  const int n = n_;
  const cplx I(0.0, 1.0);

  // dirs: real coordinate indices, x_j -> j, y_j -> n + j.
  std::function<CMatrix(const CVector&, const std::vector<int>&, size_t)> rec =
      [&](const CVector& pt, const std::vector<int>& dirs, size_t pos) -> CMatrix {
    if (pos == dirs.size()) return eval_(pt);
    CMatrix acc = CMatrix::Zero(n, n);
    const int d = dirs[pos];
    for (int s = 0; s < 6; ++s) {
      CVector q = pt;
      if (d < n)
        q(d) += off[s] * h;
      else
        q(d - n) += I * (off[s] * h);
      acc += w6[s] * rec(q, dirs, pos + 1);
    }
    return acc / h;
  };
  std::map<std::vector<int>, CMatrix> memo;
  auto real_partial = [&](std::vector<int> dirs) -> const CMatrix& {
    std::sort(dirs.begin(), dirs.end());
    auto it = memo.find(dirs);
    if (it == memo.end()) it = memo.emplace(dirs, rec(z, dirs, 0)).first;
    return it->second;
  };

  auto sp = JetSpace::get(2 * n, order);
  MetricJet out;
  out.n = n;
  out.entries.assign(static_cast<size_t>(n) * n, Jet(sp));
  for (int i = 0; i < sp->size(); ++i) {
    const auto& e = sp->exponents(i);
    // Operator list: (coordinate, anti-holomorphic?)
    std::vector<std::pair<int, bool>> ops;
    for (int v = 0; v < 2 * n; ++v)
      for (int r = 0; r < e[v]; ++r) ops.emplace_back(v % n, v >= n);
    const int deg = static_cast<int>(ops.size());
    CMatrix acc = CMatrix::Zero(n, n);
    for (int mask = 0; mask < (1 << deg); ++mask) {
      cplx coef = 1.0;
      std::vector<int> dirs;
      for (int b = 0; b < deg; ++b) {
        const bool use_y = (mask >> b) & 1;
        if (use_y) {
          coef *= ops[b].second ? 0.5 * I : -0.5 * I;
          dirs.push_back(n + ops[b].first);
        } else {
          coef *= 0.5;
          dirs.push_back(ops[b].first);
        }
      }
      acc += coef * real_partial(dirs);
    }
    double fact = 1.0;
    for (int v : e) fact *= factorial(v);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) out.entries[k * n + l][i] = acc(k, l) / fact;
  }
  return out;
}

MetricPatch MetricPatch::scaled(double lambda) const {
  EvalFn ev = [f = eval_, lambda](const CVector& z) -> CMatrix { return lambda * f(z); };
  JetFn jt;
  if (jet_) {
    jt = [f = jet_, lambda](const CVector& z, int order) {
      MetricJet j = f(z, order);
      for (auto& e : j.entries) e *= lambda;
      return j;
    };
  }
  return MetricPatch(n_, radii_, kahler_, ev, jt);
}

CenterData center_data(const MetricJet& jet) {
  CenterData c;
  const int n = jet.n;
  c.n = n;
  c.W = jet.value();
  check_metric(c.W);
  c.Winv = c.W.inverse();
  for (int j = 0; j < n; ++j) {
    c.d.push_back(jet.partial({j}, {}));
    c.db.push_back(jet.partial({}, {j}));
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) c.ddb.push_back(jet.partial({j}, {k}));
  return c;
}

namespace {

// T_{jk} = ∂_j∂̄_k ω − ∂_j ω ω⁻¹ ∂̄_k ω, entries (m, r).
CMatrix t_block(const CenterData& c, int j, int k) {
  return c.ddb[j * c.n + k] - c.d[j] * c.Winv * c.db[k];
}

}  // namespace

Tensor4 chern_coefficients(const CenterData& c) {
  const int n = c.n;
  Tensor4 C(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const CMatrix M = -t_block(c, j, k) * c.Winv;
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) C(j, k, l, m) = M(m, l);
    }
  return C;
}

Tensor4 chern_lowered(const CenterData& c, const Tensor4& chern) {
  const int n = c.n;
  Tensor4 L(n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          cplx s = 0.0;
          for (int h = 0; h < n; ++h) s += chern(j, k, h, l) * c.W(h, m);
          L(j, l, k, m) = s;
        }
  return L;
}

Tensor4 riemann_coefficients(const CenterData& c) {
  const int n = c.n;
  Tensor4 R(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const CMatrix T = t_block(c, j, k);
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) R(j, k, l, m) = 0.5 * T(l, m);
    }
  return R;
}

CMatrix ricci_form(const MetricJet& jet) {
  const int n = jet.n;
  if (jet.order() < 2) throw std::invalid_argument("ricci_form needs a jet of order 2");
  const Jet ld = log(determinant(jet.entries, n));
  CMatrix ric(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) ric(j, k) = -2.0 * ld.partial(exps_of(n, {j}, {k}));
  return ric;
}

CMatrix ricci_from_chern(const Tensor4& chern) {
  const int n = chern.n;
  CMatrix ric = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) ric(j, k) += 2.0 * chern(j, k, l, l);
  return ric;
}

double trace_against(const CMatrix& Winv, const CMatrix& form) {
  return 2.0 * (Winv * form).trace().real();
}

CMatrix curvature_operator(const CenterData& c, const Tensor4& R) {
  const int n = c.n;
  CMatrix Rm = CMatrix::Zero(n * n, n * n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          cplx acc = 0.0;
          for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) acc += c.Winv(t, l) * c.Winv(m, s) * R(j, k, l, m);
          Rm(s * n + t, j * n + k) = -4.0 * acc;
        }
  return Rm;
}

double lambda1(const CenterData& c, const Tensor4& chern) {
  const int n = c.n;
  const Tensor4 L = chern_lowered(c, chern);
  CMatrix M(n * n, n * n), N(n * n, n * n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          M(j * n + l, k * n + m) = L(j, l, k, m);
          N(j * n + l, k * n + m) = c.W(j, k) * c.W(l, m);
        }
  const CMatrix Mh = 0.5 * (M + M.adjoint());
  const CMatrix Nh = 0.5 * (N + N.adjoint());
  Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> es(Mh, Nh, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("Chern eigenproblem failed");
  return es.eigenvalues().minCoeff();
}

double bisectional(const Tensor4& R, const CVector& xi, const CVector& eta) {
  const int n = R.n;
  cplx acc = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
          acc += R(j, k, l, m) * xi(j) * std::conj(xi(k)) * eta(l) * std::conj(eta(m));
  return -4.0 * acc.real();
}

CurvatureBundle curvature_bundle(const MetricJet& jet, bool kahler) {
  const CenterData c = center_data(jet);
  CurvatureBundle b;
  b.chern = chern_coefficients(c);
  b.ricci = ricci_form(jet);
  b.scalar = trace_against(c.Winv, b.ricci);
  if (kahler) {
    b.riemann = riemann_coefficients(c);
    b.rm_operator = curvature_operator(c, b.riemann);
    b.lambda1 = lambda1(c, b.chern);
  }
  return b;
}

Tensor4 chern_coefficients(const MetricPatch& patch, const CVector& z) {
  return chern_coefficients(center_data(patch.jet(z, 2)));
}

Tensor4 riemann_coefficients(const MetricPatch& patch, const CVector& z) {
  if (!patch.kahler()) throw NonKahlerError("riemann_coefficients requires a Kähler patch");
  return riemann_coefficients(center_data(patch.jet(z, 2)));
}

CMatrix ricci_form(const MetricPatch& patch, const CVector& z) {
  const MetricJet j = patch.jet(z, 2);
  check_metric(j.value());
  return ricci_form(j);
}

double scalar_curvature(const MetricPatch& patch, const CVector& z) {
  const MetricJet j = patch.jet(z, 2);
  const CenterData c = center_data(j);
  return trace_against(c.Winv, ricci_form(j));
}

CMatrix curvature_operator(const MetricPatch& patch, const CVector& z) {
  if (!patch.kahler()) throw NonKahlerError("curvature_operator requires a Kähler patch");
  const CenterData c = center_data(patch.jet(z, 2));
  return curvature_operator(c, riemann_coefficients(c));
}

BisectionalAndLambda bisectional_and_lambda1(const MetricPatch& patch, const CVector& z) {
  if (!patch.kahler()) throw NonKahlerError("bisectional curvature requires a Kähler patch");
  const CenterData c = center_data(patch.jet(z, 2));
  Tensor4 R = riemann_coefficients(c);
  BisectionalAndLambda out;
  out.lambda1 = lambda1(c, chern_coefficients(c));
  out.bisectional = [R = std::move(R)](const CVector& xi, const CVector& eta) {
    return bisectional(R, xi, eta);
  };
  return out;
}

CurvatureBundle curvature_bundle(const MetricPatch& patch, const CVector& z) {
  return curvature_bundle(patch.jet(z, 2), patch.kahler());
}

// ---------------------------------------------------------------------------
// Geodesic normal form

cplx NormalForm::h3(int p, int j, int k, int l, int m) const {
  const int n = static_cast<int>(center.size());
  return H3[((((p * n + j) * n + k) * n + l) * n + m)];
}

namespace {

// Metric in w-coordinates for the holomorphic map z = p + map(w).
MetricJet transform(const MetricJet& om, const std::vector<Jet>& map, int order) {
  const int n = om.n;
  std::vector<Jet> args;
  std::vector<Jet> J(static_cast<size_t>(n) * n), Jc(static_cast<size_t>(n) * n);
  for (int k = 0; k < n; ++k) args.push_back(map[k].truncated(order));
  for (int k = 0; k < n; ++k) args.push_back(args[k].conjugate_swap(n));
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a) {
      J[k * n + a] = map[k].diff(a).truncated(order);
      Jc[k * n + a] = J[k * n + a].conjugate_swap(n);
    }
  std::vector<Jet> omz;
  omz.reserve(om.entries.size());
  for (const auto& e : om.entries) omz.push_back(e.substitute(args));
  MetricJet out;
  out.n = n;
  auto sp = args[0].space_ptr();
  out.entries.assign(static_cast<size_t>(n) * n, Jet(sp));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet acc(sp);
      for (int k = 0; k < n; ++k) {
        Jet row(sp);
        for (int l = 0; l < n; ++l) row += omz[k * n + l] * Jc[l * n + b];
        acc += J[k * n + a] * row;
      }
      out.entries[a * n + b] = acc;
    }
  return out;
}

bool is_holomorphic_monomial(const std::vector<int>& e, int n) {
  for (int v = n; v < 2 * n; ++v)
    if (e[v] != 0) return false;
  return true;
}

std::vector<std::vector<cplx>> sample_directions(int n, int count) {
  std::vector<std::vector<cplx>> out;
  if (n == 1) {
    for (int i = 0; i < count; ++i) {
      const double th = 2.0 * M_PI * (i + 0.5) / count;
      out.push_back({std::polar(1.0, th)});
    }
    return out;
  }
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g;
  for (int i = 0; i < count; ++i) {
    std::vector<cplx> v(n);
    double nrm = 0.0;
    for (auto& c : v) {
      c = cplx(g(rng), g(rng));
      nrm += std::norm(c);
    }
    for (auto& c : v) c /= std::sqrt(nrm);
    out.push_back(v);
  }
  return out;
}

// Exact metric in w-coordinates at the point w, evaluated through the patch.
CMatrix exact_transformed(const MetricPatch& patch, const NormalForm& nf, const std::vector<cplx>& w) {
  const int n = patch.n();
  std::vector<cplx> ww(2 * n);
  for (int k = 0; k < n; ++k) {
    ww[k] = w[k];
    ww[n + k] = std::conj(w[k]);
  }
  CVector z = nf.center;
  CMatrix J(n, n);
  for (int k = 0; k < n; ++k) {
    z(k) += nf.map[k].evaluate(ww);
    for (int a = 0; a < n; ++a) J(k, a) = nf.map[k].diff(a).evaluate(ww);
  }
  return J.transpose() * patch.eval(z) * J.conjugate();
}

}  // namespace

NormalForm geodesic_normal_form(const MetricPatch& patch, const CVector& center, int order) {
  if (!patch.kahler()) throw NonKahlerError("geodesic normal form requires a Kähler patch");
  if (!patch.contains(center)) throw DomainError("normal-form center outside the patch domain");
  if (order != 2 && order != 3) throw std::invalid_argument("normal form order must be 2 or 3");
  const int n = patch.n();
  const int K = order;
  const MetricJet om = patch.jet(center, K);
  const CMatrix W0 = om.value();
  check_metric(W0);

  NormalForm nf;
  nf.center = center;
  nf.order = order;
  Eigen::LLT<CMatrix> llt(0.5 * (W0 + W0.adjoint()));
  const CMatrix Linv = CMatrix(llt.matrixL()).inverse();
  nf.A = Linv.transpose();
  const CMatrix Binv = (W0 * nf.A.conjugate()).inverse();

  auto sp = JetSpace::get(2 * n, K + 1);
  nf.map.assign(n, Jet(sp));
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a) nf.map[k] += nf.A(k, a) * Jet::variable(sp, a);

  for (int d = 1; d <= K; ++d) {
    const MetricJet tr = transform(om, nf.map, K);
    const auto& tsp = tr.at(0, 0).space();
    // Holomorphic monomials of degree d (rows) and d+1 (unknowns).
    std::vector<int> rows_m, cols_m;
    for (int i = 0; i < tsp.size(); ++i)
      if (tsp.degree(i) == d && is_holomorphic_monomial(tsp.exponents(i), n)) rows_m.push_back(i);
    for (int i = 0; i < sp->size(); ++i)
      if (sp->degree(i) == d + 1 && is_holomorphic_monomial(sp->exponents(i), n)) cols_m.push_back(i);
    const int nr = static_cast<int>(rows_m.size());
    const int nc = static_cast<int>(cols_m.size());
    CMatrix M = CMatrix::Zero(n * nr, nc);
    for (int a = 0; a < n; ++a)
      for (int ci = 0; ci < nc; ++ci) {
        std::vector<int> e = sp->exponents(cols_m[ci]);
        if (e[a] == 0) continue;
        const double mult = e[a];
        --e[a];
        for (int ri = 0; ri < nr; ++ri)
          if (tsp.exponents(rows_m[ri]) == e) M(a * nr + ri, ci) = mult;
      }
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(M);
    for (int k = 0; k < n; ++k) {
      CVector rhs(n * nr);
      for (int a = 0; a < n; ++a)
        for (int ri = 0; ri < nr; ++ri) {
          cplx q = 0.0;
          for (int b = 0; b < n; ++b) q += tr.at(a, b)[rows_m[ri]] * Binv(b, k);
          rhs(a * nr + ri) = -q;
        }
      const CVector sol = cod.solve(rhs);
      nf.kahler_defect = std::max(nf.kahler_defect, (M * sol - rhs).cwiseAbs().maxCoeff());
      for (int ci = 0; ci < nc; ++ci) nf.map[k][cols_m[ci]] += sol(ci);
    }
  }

  nf.transformed = transform(om, nf.map, K);
  nf.H2 = Tensor4(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
          nf.H2(j, k, l, m) = -nf.transformed.at(l, m).coeff(exps_of(n, {j}, {k}));
  if (K >= 3) {
    nf.H3.assign(static_cast<size_t>(n) * n * n * n * n, cplx(0.0));
    for (int p = 0; p < n; ++p)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) {
              const double mult = (p == j) ? 1.0 : 2.0;
              nf.H3[((((p * n + j) * n + k) * n + l) * n + m)] =
                  -nf.transformed.at(l, m).coeff(exps_of(n, {p, j}, {k})) / mult;
            }
  }

  double rmax = 1e300;
  for (int k = 0; k < n; ++k) rmax = std::min(rmax, patch.radii()[k] - std::abs(center(k)));
  // |w| = r moves z by at most r / sqrt(λ_min(ω(p))); stay well inside the chart.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (W0 + W0.adjoint()), Eigen::EigenvaluesOnly);
  const double base = std::min(0.25 * rmax * std::sqrt(es.eigenvalues().minCoeff()), 0.2);
  for (int i = 0; i < 4; ++i) {
    const double r = base / std::pow(2.0, i);
    nf.radii.push_back(r);
    nf.residual.push_back(normal_form_residual(patch, nf, r));
  }
  return nf;
}

double normal_form_residual(const MetricPatch& patch, const NormalForm& nf, double radius) {
  const int n = patch.n();
  double sup = 0.0;
  for (const auto& dir : sample_directions(n, n == 1 ? 16 : 32)) {
    std::vector<cplx> w(n);
    for (int k = 0; k < n; ++k) w[k] = radius * dir[k];
    std::vector<cplx> ww(2 * n);
    for (int k = 0; k < n; ++k) {
      ww[k] = w[k];
      ww[n + k] = std::conj(w[k]);
    }
    const CMatrix exact = exact_transformed(patch, nf, w);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        sup = std::max(sup, std::abs(exact(a, b) - nf.transformed.at(a, b).evaluate(ww)));
  }
  return sup;
}

double volume_density_expansion_check(const MetricPatch& patch, const NormalForm& nf, double radius) {
  const int n = patch.n();
  const MetricJet om = patch.jet(nf.center, 2);
  const CMatrix ric = ricci_form(om);
  // Coefficients of Ric = i Σ R dw ∧ dw̄ in w-coordinates.
  const CMatrix R = 0.5 * nf.A.transpose() * ric * nf.A.conjugate();
  double sup = 0.0;
  for (const auto& dir : sample_directions(n, n == 1 ? 16 : 32)) {
    std::vector<cplx> w(n);
    CVector wv(n);
    for (int k = 0; k < n; ++k) {
      w[k] = radius * dir[k];
      wv(k) = w[k];
    }
    const cplx det = exact_transformed(patch, nf, w).determinant();
    const cplx model = 1.0 - (wv.transpose() * R * wv.conjugate())(0, 0);
    sup = std::max(sup, std::abs(det - model) / std::pow(radius, 3));
  }
  return sup;
}

double riemann_symmetry_defect(const Tensor4& R) {
  const int n = R.n;
  double d = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          d = std::max(d, std::abs(std::conj(R(j, k, l, m)) - R(k, j, m, l)));
          d = std::max(d, std::abs(R(j, k, l, m) - R(l, m, j, k)));
          d = std::max(d, std::abs(R(j, k, l, m) - R(j, m, l, k)));
        }
  return d;
}

double hermitian_defect(const CMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace krf

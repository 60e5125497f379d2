#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "krf/jet.hpp"

namespace krf {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class DerivativeSource { analytic, finite_difference };

// Rank-4 complex array with n^4 entries, index order as named by the producer.
struct Tensor4 {
  int n = 0;
  std::vector<cplx> data;

  Tensor4() = default;
  explicit Tensor4(int n) : n(n), data(static_cast<size_t>(n) * n * n * n, cplx(0.0)) {}
  cplx& operator()(int a, int b, int c, int d) { return data[((a * n + b) * n + c) * n + d]; }
  cplx operator()(int a, int b, int c, int d) const { return data[((a * n + b) * n + c) * n + d]; }
  double max_abs() const;
};

// Taylor jet of ω_{kl̄} about a chart point p in the variables
// (w, w̄) = (z − p, conj(z − p)); entries are stored row-major.
struct MetricJet {
  int n = 0;
  std::vector<Jet> entries;

  const Jet& at(int k, int l) const { return entries[k * n + l]; }
  int order() const { return entries.front().space().order(); }
  CMatrix value() const;
  // ∂^{holo} ∂̄^{anti} ω at the center; indices may repeat.
  CMatrix partial(const std::vector<int>& holo, const std::vector<int>& anti) const;
};

// Hermitian metric ω = (i/2) Σ ω_{kl̄} dz_k ∧ dz̄_l on a polydisc chart.
class MetricPatch {
 public:
  using EvalFn = std::function<CMatrix(const CVector&)>;
  using JetFn = std::function<MetricJet(const CVector&, int)>;

  // An empty JetFn selects 6th-order central finite differences with
  // step radius * 1e-2.
  MetricPatch(int n, std::vector<double> radii, bool kahler, EvalFn eval, JetFn jet = {});

  int n() const { return n_; }
  const std::vector<double>& radii() const { return radii_; }
  bool kahler() const { return kahler_; }
  DerivativeSource derivative_source() const { return source_; }
  bool contains(const CVector& z) const;

  CMatrix eval(const CVector& z) const;
  MetricJet jet(const CVector& z, int order) const;

  // First/second/third partials, one matrix per monomial of that degree
  // in (w, w̄), in JetSpace order.
  std::vector<CMatrix> deriv1(const CVector& z) const { return derivs(z, 1); }
  std::vector<CMatrix> deriv2(const CVector& z) const { return derivs(z, 2); }
  std::vector<CMatrix> deriv3(const CVector& z) const { return derivs(z, 3); }

  MetricPatch scaled(double lambda) const;

 private:
  std::vector<CMatrix> derivs(const CVector& z, int degree) const;
  MetricJet fd_jet(const CVector& z, int order) const;

  int n_;
  std::vector<double> radii_;
  bool kahler_;
  DerivativeSource source_;
  EvalFn eval_;
  JetFn jet_;
};

struct CurvatureBundle {
  Tensor4 chern;     // C^{j,k̄}_{l,m} as chern(j,k,l,m)
  Tensor4 riemann;   // R_{j,k̄,l,m̄} as riemann(j,k,l,m); empty for non-Kähler
  CMatrix ricci;     // Ric_{kl̄} with Ric = (i/2) Σ Ric_{kl̄} dz_k ∧ dz̄_l
  double scalar = 0.0;
  CMatrix rm_operator;  // Rm^{s,t̄}_{j,k̄} at row s*n+t, column j*n+k
  double lambda1 = 0.0;
};

// Derivatives of ω at the chart point, reused by all curvature formulas.
struct CenterData {
  int n = 0;
  CMatrix W, Winv;
  std::vector<CMatrix> d;    // ∂_j ω
  std::vector<CMatrix> db;   // ∂̄_k ω
  std::vector<CMatrix> ddb;  // ∂_j ∂̄_k ω at j*n+k
};

CenterData center_data(const MetricJet& jet);

Tensor4 chern_coefficients(const CenterData& c);
// C_{j,l,k̄,m̄} = Σ_h C^{j,k̄}_{h,l} ω_{h m̄}, stored as (j,l,k,m).
Tensor4 chern_lowered(const CenterData& c, const Tensor4& chern);
Tensor4 riemann_coefficients(const CenterData& c);
// −2 ∂∂̄ log det ω from the jet (order ≥ 2).
CMatrix ricci_form(const MetricJet& jet);
CMatrix ricci_from_chern(const Tensor4& chern);
double trace_against(const CMatrix& Winv, const CMatrix& form);
CMatrix curvature_operator(const CenterData& c, const Tensor4& riemann);
double lambda1(const CenterData& c, const Tensor4& chern);
double bisectional(const Tensor4& riemann, const CVector& xi, const CVector& eta);
CurvatureBundle curvature_bundle(const MetricJet& jet, bool kahler);

Tensor4 chern_coefficients(const MetricPatch& patch, const CVector& z);
Tensor4 riemann_coefficients(const MetricPatch& patch, const CVector& z);
CMatrix ricci_form(const MetricPatch& patch, const CVector& z);
double scalar_curvature(const MetricPatch& patch, const CVector& z);
CMatrix curvature_operator(const MetricPatch& patch, const CVector& z);

struct BisectionalAndLambda {
  std::function<double(const CVector&, const CVector&)> bisectional;
  double lambda1;
};
BisectionalAndLambda bisectional_and_lambda1(const MetricPatch& patch, const CVector& z);
CurvatureBundle curvature_bundle(const MetricPatch& patch, const CVector& z);

struct NormalForm {
  CVector center;
  int order = 2;
  CMatrix A;              // linear part, Aᵀ ω(p) Ā = I
  std::vector<Jet> map;   // z_k − p_k as holomorphic jets in w, degree ≤ order+1
  Tensor4 H2;             // H^{j,k̄}_{l,m̄} as H2(j,k,l,m)
  std::vector<cplx> H3;   // H^{p,j,k̄}_{l,m̄} at ((((p*n+j)*n+k)*n+l)*n+m)
  MetricJet transformed;  // jet of the metric in w-coordinates
  double kahler_defect = 0.0;  // least-squares residual of the degree solves
  std::vector<double> radii;
  std::vector<double> residual;  // sup deviation from the normal form per radius

  cplx h3(int p, int j, int k, int l, int m) const;
};

NormalForm geodesic_normal_form(const MetricPatch& patch, const CVector& center, int order);
// Sup over sampled |w| = radius of |ω̃(w) − normal form(w)|.
double normal_form_residual(const MetricPatch& patch, const NormalForm& nf, double radius);
// Sup over sampled |w| = radius of |det ω̃ − (1 − Σ R_{kl̄} w_k w̄_l)| / radius³,
// with R_{kl̄} the coefficients of Ric = i Σ R_{kl̄} dw_k ∧ dw̄_l.
double volume_density_expansion_check(const MetricPatch& patch, const NormalForm& nf, double radius);

// Max over index pairs of the three Riemann symmetry defects.
double riemann_symmetry_defect(const Tensor4& r);
double hermitian_defect(const CMatrix& m);

}  // namespace krf

#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "krf/spectral.hpp"

namespace krf {

// Rotation-invariant Kähler geometry on CPⁿ in the class 2πc₁, reduced to
// the moment coordinate x = |z|²/(1+|z|²) ∈ [0, 1]. The reference is
// Fubini–Study with potential (n+1) log(1+|z|²); against it an invariant
// metric ω_φ has relative eigenvalues
//   τ = 1 + (2/s)(1−x)φ'          tangential, multiplicity n−1
//   r = 1 + (2/s)(x(1−x)φ')'      radial
// with s = 2(n+1), and ωⁿ/V = n x^{n−1} dx.
class SymmetricGeometry {
 public:
  SymmetricGeometry(int n, int N);

  int n() const { return n_; }
  int N() const { return grid_.N(); }
  int size() const { return grid_.size(); }
  double s() const { return s_; }
  double volume() const { return V_; }
  const ChebyshevGrid& grid() const { return grid_; }
  const Vec& x() const { return grid_.x(); }
  // Weights of ⨍ against ωⁿ (sum to 1) and of ∫ against ωⁿ (sum to V).
  const Vec& mean_weights() const { return mean_w_; }
  Vec quadrature_weights() const { return V_ * mean_w_; }
  // FS moment profile (s/2) x on the grid.
  const Vec& reference_profile() const { return ref_profile_; }
  // Ricci potential of the reference metric (zero up to roundoff).
  const Vec& h_ref() const { return h_ref_; }

  // T[v] = (1−x) v' and R[v] = (x(1−x) v')' as matrices.
  const Mat& T_op() const { return T_; }
  const Mat& R_op() const { return R_; }

 private:
  friend std::shared_ptr<const SymmetricGeometry> fubini_study(int n, int N);
  int n_;
  double s_;
  double V_;
  ChebyshevGrid grid_;
  Vec mean_w_, ref_profile_, h_ref_;
  Mat T_, R_;
};

using GeometryPtr = std::shared_ptr<const SymmetricGeometry>;

GeometryPtr fubini_study(int n, int N);

// Ricci potential conventions: ricci_potential is h with Ric − ω = i∂∂̄h;
// flow_ricci_potential is u with Ric − ω = −i∂∂̄u; soliton_potential is u_s
// with ω − Ric = 2i∂∂̄u_s.
enum class FieldRole {
  generic,
  potential,
  density,
  curvature,
  eigenfunction,
  ricci_potential,
  flow_ricci_potential,
  soliton_potential
};

struct ScalarField {
  Vec values;
  FieldRole role = FieldRole::generic;
};

// Converts between Ricci potential conventions up to additive constants.
ScalarField convert_ricci_potential(const ScalarField& f, FieldRole target);

struct KahlerPotential {
  GeometryPtr geom;
  Vec values;
};

// Everything derived from ω_φ on the grid.
struct MetricData {
  GeometryPtr geom;
  Vec phi, dphi;    // φ, φ'
  Vec tau, r;       // relative eigenvalues against ω
  Vec f, logf;      // ω_φⁿ/ωⁿ
  Vec m, mprime;    // moment profile (s/2)x + x(1−x)φ' and its derivative (s/2) r
  Vec tau_ric, r_ric;  // relative eigenvalues of Ric(ω_φ) against ω
  Vec scal;
  Vec mean_w;       // weights of ⨍ against ω_φⁿ
  Mat lap;          // Δ_φ
  double ke_residual = 0.0;

  int n() const { return geom->n(); }
  double s() const { return geom->s(); }
  const Vec& x() const { return geom->x(); }
};

// Throws AdmissibilityError naming the first node where ω_φ fails to be positive.
MetricData metric_from_potential(const KahlerPotential& phi);
MetricData reference_metric(const GeometryPtr& geom);
// Smallest relative eigenvalue of ω_φ against ω over the grid.
double min_relative_eigenvalue(const GeometryPtr& geom, const Vec& phi);

Vec laplacian(const MetricData& md, const Vec& u);
Mat weighted_laplacian_matrix(const MetricData& md, const Vec& h);
Vec weighted_laplacian(const MetricData& md, const Vec& h, const Vec& u);

struct GradientNorms {
  Vec dbar2;  // |∂u|²
  Vec grad2;  // |∇u|² = 2|∂u|²
};
GradientNorms gradient_norms(const MetricData& md, const Vec& u);
// ⟨∂a, ∂b⟩ pointwise.
Vec gradient_pairing(const MetricData& md, const Vec& a, const Vec& b);
// |∇^{1,0}∂u|² = 2x²(1−x)²((u'/m')')², zero iff u = c·m + d.
Vec hessian20_norm(const MetricData& md, const Vec& u);

struct RicciPotentialResult {
  ScalarField h;
  double linear_residual = 0.0;
  int constant_iterations = 0;
};
// Ric(ω_φ) = ω_φ + i∂∂̄h with ⨍e^h ω_φⁿ = 1.
RicciPotentialResult ricci_potential(const MetricData& md, double initial_constant = 0.0);
// Max deviation between i∂∂̄h and Ric − ω_φ in relative eigenvalues.
double ricci_ddbar_residual(const MetricData& md, const Vec& h);

// (1/V) ∫ u · weight ω_φⁿ.
double mean_integral(const MetricData& md, const Vec& u, const std::optional<Vec>& weight = {});
// (1/V) ∫ u ωⁿ against the reference.
double mean_reference(const SymmetricGeometry& g, const Vec& u);

// Meridian length ∫₀¹ sqrt(m'/(2x(1−x))) dx; exact geodesic diameter for n = 1.
double diameter(const MetricData& md);

}  // namespace krf

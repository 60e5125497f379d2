#pragma once

#include <memory>

#include "krf/geometry.hpp"
#include "krf/tensor_kernel.hpp"

namespace krf {

// Spectral derivatives φ^{(k)}, k ≤ kmax, of an invariant profile, evaluable
// at any x ∈ [0, 1] (exact grid values at nodes, barycentric elsewhere).
class ProfileJet {
 public:
  ProfileJet(const GeometryPtr& geom, const Vec& phi, int kmax = 5);

  int kmax() const { return static_cast<int>(derivs_.size()) - 1; }
  double derivative(int k, double x) const;
  double derivative_at_node(int k, int j) const { return derivs_[k](j); }
  // Taylor coefficients φ^{(k)}(x)/k!, k ≤ order.
  std::vector<cplx> taylor(double x, int order) const;
  std::vector<cplx> taylor_at_node(int j, int order) const;

 private:
  GeometryPtr geom_;
  std::vector<Vec> derivs_;
};

// Chart A: affine coordinates z_k = Z_k/Z_0, x = |z|²/(1+|z|²), used for x ≤ 1/2.
// Chart B: ζ = (Z_0/Z_1, Z_2/Z_1, ...), x = 1 − |ζ_1|²/(1+|ζ|²), used for x > 1/2.
enum class Chart { A, B };

Chart chart_for(double x);
CVector chart_point(int n, double x, Chart chart);
// x(z) as a jet about z.
Jet moment_jet(const CVector& z, int order, Chart chart);

// Invariant metric ω + i∂∂̄φ in the given chart; phi may be null for the
// reference metric. Analytic jets come from Φ_FS + φ(x(z)).
MetricPatch invariant_patch(const GeometryPtr& geom, std::shared_ptr<const ProfileJet> phi, Chart chart);
// Jet of φ(x(z)) alone; node >= 0 expands about that grid node exactly.
Jet profile_potential_jet(const ProfileJet& phi, const CVector& z, int order, Chart chart, int node = -1);

}  // namespace krf

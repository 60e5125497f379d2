#pragma once

#include "krf/charts.hpp"

namespace krf {

// Per-node tensor kernels over the collocation grid. Each node is
// independent; `parallel` distributes nodes over OpenMP threads and is
// bitwise identical to `serial`.
enum class Execution { serial, parallel };

// λ₁ of the reference metric at every node.
Vec reference_lambda1_field(const GeometryPtr& geom, Execution exec = Execution::parallel);

// Scal(ω_φ) at every node, from chart jets and the Chern/Ricci kernels.
Vec tensor_scalar_field(const GeometryPtr& geom, const Vec& phi, Execution exec = Execution::parallel);

// |∇^{1,0}_ω ∂∂̄φ|²_{ω,φ} at every node.
Vec c3_field(const GeometryPtr& geom, const Vec& phi, Execution exec = Execution::parallel);

// Mixed norm 8 ω^{qp̄} ω_φ^{lj̄} ω_φ^{km̄} α_{pjk̄} conj(α_{qlm̄}) with
// α_{pkl̄} = φ_{pkl̄} − ∂_p ω_{kr̄} ω^{rs̄} φ_{sl̄}. `ddbar_phi` is the jet
// of 2∂_k∂̄_l φ (so ω_φ = ref + ddbar_phi); both jets need order ≥ 1.
double c3_norm_at(const MetricJet& ref, const MetricJet& ddbar_phi);

}  // namespace krf

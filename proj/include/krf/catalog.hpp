#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "krf/geometry.hpp"

namespace krf {

// P_l(2x − 1) on the grid.
Vec legendre_profile(const GeometryPtr& geom, int l);

// Named profiles: "P<l>" (Legendre), "P2+P4" (P2 + 0.3 P4), "skew" (P1 + P2,
// no antipodal symmetry), "near_boundary" (P2 scaled to the admissibility
// margin given as amplitude).
Vec initial_profile(const GeometryPtr& geom, const std::string& profile, double amplitude);
bool known_profile(const std::string& profile);

// Largest multiple a·p with min relative eigenvalue of ω_{a p} equal to target.
double amplitude_for_margin(const GeometryPtr& geom, const Vec& p, double target);

// Σ_{l ≤ degree} c_l P_l with random c_l, rescaled so that the smallest
// relative eigenvalue lies uniformly in [lo, hi].
Vec random_admissible_potential(const GeometryPtr& geom, std::uint64_t seed, double lo = 0.3, double hi = 0.9,
                                int degree = 6);
// Random smooth test function (trigonometric in x).
Vec random_test_function(const GeometryPtr& geom, std::uint64_t seed, int modes = 5);

struct CatalogEntry {
  std::string id;
  std::string profile;
  double amplitude = 0.0;
};
// The five antipodally symmetric CP¹ runs used for flow acceptance.
std::vector<CatalogEntry> flow_catalog();

}  // namespace krf

#include "krf/catalog.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace krf {

Vec legendre_profile(const GeometryPtr& geom, int l) {
  const Vec t = (2.0 * geom->x().array() - 1.0).matrix();
  Vec prev = Vec::Ones(t.size());
  if (l == 0) return prev;
  Vec cur = t;
  for (int k = 1; k < l; ++k) {
    Vec next = (((2.0 * k + 1.0) * t.array() * cur.array() - k * prev.array()) / (k + 1.0)).matrix();
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

bool known_profile(const std::string& p) {
  if (p == "P2+P4" || p == "skew" || p == "near_boundary") return true;
  if (p.size() >= 2 && p[0] == 'P') {
    for (size_t i = 1; i < p.size(); ++i)
      if (p[i] < '0' || p[i] > '9') return false;
    return true;
  }
  return false;
}

Vec initial_profile(const GeometryPtr& geom, const std::string& p, double amplitude) {
  if (!known_profile(p)) throw std::invalid_argument("unknown profile '" + p + "'");
  if (p == "P2+P4") return amplitude * (legendre_profile(geom, 2) + 0.3 * legendre_profile(geom, 4));
  if (p == "skew") return amplitude * (legendre_profile(geom, 1) + legendre_profile(geom, 2));
  if (p == "near_boundary") {
    const Vec p2 = legendre_profile(geom, 2);
    return amplitude_for_margin(geom, p2, amplitude) * p2;
  }
  return amplitude * legendre_profile(geom, std::stoi(p.substr(1)));
}

double amplitude_for_margin(const GeometryPtr& geom, const Vec& p, double target) {
  if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("margin must lie in (0, 1)");
  // min relative eigenvalue is concave in the amplitude; bracket then bisect.
  double lo = 0.0, hi = 1.0;
  while (min_relative_eigenvalue(geom, hi * p) > target) {
    hi *= 2.0;
    if (hi > 1e6) throw std::invalid_argument("profile never reaches the admissibility margin");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (min_relative_eigenvalue(geom, mid * p) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Vec random_admissible_potential(const GeometryPtr& geom, std::uint64_t seed, double lo, double hi, int degree) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Vec p = Vec::Zero(geom->size());
  for (int l = 1; l <= degree; ++l) p += (U(rng) / (l * l)) * legendre_profile(geom, l);
  const double target = lo + (hi - lo) * 0.5 * (U(rng) + 1.0);
  return amplitude_for_margin(geom, p, target) * p;
}

Vec random_test_function(const GeometryPtr& geom, std::uint64_t seed, int modes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const Vec& x = geom->x();
  Vec u = Vec::Constant(x.size(), U(rng));
  for (int k = 1; k <= modes; ++k) {
    const double a = U(rng) / k, b = U(rng) / k;
    u += (a * (M_PI * k * x.array()).cos() + b * (M_PI * k * x.array()).sin()).matrix();
  }
  return u;
}

std::vector<CatalogEntry> flow_catalog() {
  return {
      {"p2_small", "P2", 0.1},
      {"p2_medium", "P2", 0.2},
      {"p4_small", "P4", 0.05},
      {"p2_p4_mix", "P2+P4", 0.1},
      {"p2_near_boundary", "near_boundary", 0.1},
  };
}

}  // namespace krf

#include <cmath>

#include "doctest.h"
#include "krf/catalog.hpp"
#include "krf/estimates.hpp"

using namespace krf;

TEST_CASE("Perelman monitor at Fubini-Study") {
  const GeometryPtr g = fubini_study(1, 64);
  const PerelmanBounds b = perelman_monitor(make_state(g, Vec::Zero(g->size())));
  CHECK(b.sup_u < 1e-12);
  CHECK(b.sup_grad_u < 1e-10);
  CHECK(b.sup_lap_u < 1e-9);
  CHECK(b.sup_scal == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.diam == doctest::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("density ratio agrees with the algebraic route") {
  for (int n : {1, 2}) {
    const GeometryPtr g = fubini_study(n, 48);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const DensityRatio d = density_ratio(make_state(g, random_admissible_potential(g, seed)));
      CHECK(d.min > 0.0);
      CHECK(d.relative_disagreement() <= 1e-10);
    }
  }
}

TEST_CASE("Yau C2 inequality on random admissible potentials") {
  for (int n : {1, 2}) {
    const GeometryPtr g = fubini_study(n, 96);
    const Vec lam = reference_lambda1_field(g);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const MetricData md = metric_from_potential({g, random_admissible_potential(g, seed)});
      const YauTerms y = yau_c2_terms(md, lam);
      CHECK(y.residual.minCoeff() >= -1e-6);
      CHECK(y.cauchy_schwarz.minCoeff() >= -1e-6);
      CHECK(y.trace.minCoeff() > 0.0);
    }
  }
}

TEST_CASE("Yau C2 at Fubini-Study") {
  // CP1: equality. CP2: the reference λ₁ vanishes, leaving LHS 4n = 8.
  const GeometryPtr g1 = fubini_study(1, 32);
  CHECK(yau_c2_terms(reference_metric(g1)).residual.cwiseAbs().maxCoeff() < 1e-10);
  const GeometryPtr g2 = fubini_study(2, 32);
  CHECK((yau_c2_terms(reference_metric(g2)).residual.array() - 8.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("Cauchy-Schwarz step is an equality on CP1") {
  const GeometryPtr g = fubini_study(1, 64);
  const MetricData md = metric_from_potential({g, initial_profile(g, "skew", 0.1)});
  CHECK(yau_c2_terms(md).cauchy_schwarz.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("theta moment chain") {
  const GeometryPtr g = fubini_study(2, 64);
  const MetricData md = metric_from_potential({g, random_admissible_potential(g, 17)});
  const ThetaMoments t = theta_moment_chain(md, 12);
  CHECK(t.moments.size() == 12);
  CHECK(t.ratios.size() == 11);
  CHECK(t.min_residual() >= -1e-8);
  for (double m : t.moments) CHECK(m > 0.0);
  const ThetaMoments z = theta_moment_chain(reference_metric(g), 12);
  CHECK(z.min_residual() == 0.0);
}

TEST_CASE("oscillation and L^p norm at the reference") {
  const GeometryPtr g = fubini_study(1, 32);
  const OscillationLp o = oscillation_and_lp(reference_metric(g));
  CHECK(o.osc == 0.0);
  CHECK(o.lp_norm == doctest::Approx(std::pow(g->volume(), 1.0 / 1.5)).epsilon(1e-13));
  CHECK(o.eps == 0.5);
  CHECK(o.delta == 0.5);
}

TEST_CASE("monitor record along a short flow") {
  const GeometryPtr g = fubini_study(1, 48);
  const Vec lam = reference_lambda1_field(g);
  FlowOptions opt;
  opt.dt = 0.1;
  opt.t_max = 1.0;
  opt.stop_on_convergence = false;
  run(g, initial_profile(g, "P2", 0.2), opt, [&](const FlowState& s) {
    const MonitorRecord r = monitor(s, lam);
    CHECK(r.density_min > 0.0);
    CHECK(r.c2_trace_min > 0.0);
    CHECK(r.c2_residual >= -1e-6);
    CHECK(r.theta.min_residual() >= -1e-8);
    CHECK(r.c3_norm >= 0.0);
  });
}

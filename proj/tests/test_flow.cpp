#include <cmath>

#include "doctest.h"
#include "krf/catalog.hpp"
#include "krf/error.hpp"
#include "krf/flow.hpp"

using namespace krf;

namespace {

FlowState advance(const GeometryPtr& g, const Vec& phi0, double dt, double t_end, Scheme scheme) {
  FlowState s = make_state(g, phi0);
  const long steps = std::lround(t_end / dt);
  for (long k = 1; k <= steps; ++k) {
    s = step(s, dt, scheme).state;
    s.t = k * dt;
  }
  return s;
}

}  // namespace

TEST_CASE("Fubini-Study is stationary and converges immediately") {
  const GeometryPtr g = fubini_study(2, 32);
  FlowOptions opt;
  opt.dt = 0.1;
  opt.t_max = 5.0;
  const FlowRun fr = run(g, Vec::Zero(g->size()), opt);
  CHECK(fr.termination == Termination::converged_KE);
  CHECK(fr.snapshots.back().phi.values.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(fr.snapshots.back().c) < 1e-12);
}

TEST_CASE("normalization and flow equation hold on every snapshot") {
  const GeometryPtr g = fubini_study(1, 48);
  FlowOptions opt;
  opt.dt = 0.05;
  opt.t_max = 2.0;
  opt.stop_on_convergence = false;
  int count = 0;
  run(g, random_admissible_potential(g, 8, 0.5, 0.9, 4), opt, [&](const FlowState& s) {
    ++count;
    CHECK(normalization_defect(s) < 1e-12);
    CHECK(flow_equation_defect(s) < 1e-10);
    CHECK(ricci_constants_defect(s) < 1e-8);
  });
  CHECK(count == 41);
}

TEST_CASE("semi-implicit and RK4 agree at t = 1") {
  const GeometryPtr g = fubini_study(1, 32);
  const Vec phi0 = initial_profile(g, "P2", 0.1);
  const FlowState a = advance(g, phi0, 0.0025, 1.0, Scheme::semi_implicit);
  const FlowState b = advance(g, phi0, 0.002, 1.0, Scheme::rk4);
  CHECK((a.phi.values - b.phi.values).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("a large explicit step is reported as a stability failure") {
  const GeometryPtr g = fubini_study(1, 48);
  FlowOptions opt;
  opt.scheme = Scheme::rk4;
  opt.dt = 1.0;
  opt.t_max = 5.0;
  const FlowRun fr = run(g, initial_profile(g, "P2", 0.2), opt);
  CHECK(fr.termination == Termination::stability_failure);
  CHECK_FALSE(fr.message.empty());
  CHECK_THROWS_AS(step(make_state(g, initial_profile(g, "P2", 0.2)), 1.0, Scheme::rk4), StabilityError);
}

TEST_CASE("monotonicity of nu, W and a along a perturbed run") {
  for (int n : {1, 2}) {
    const GeometryPtr g = fubini_study(n, 48);
    FlowOptions opt;
    opt.dt = 0.05;
    opt.t_max = 6.0;
    opt.stop_on_convergence = false;
    const FlowRun fr = run(g, initial_profile(g, "skew", 0.1), opt);
    const MonotonicityReport m = check_monotonicity(fr.steps);
    CHECK(m.nu_ok);
    CHECK(m.W_ok);
    CHECK(m.a_ok);
    // a ≥ 0 with equality only at the Einstein metric
    for (const auto& r : fr.steps) CHECK(r.a >= -1e-14);
  }
}

TEST_CASE("Newton solver converges to an Einstein metric") {
  const GeometryPtr g = fubini_study(1, 48);
  const NewtonResult nr = newton_ke_solve(g, initial_profile(g, "P2", 0.2));
  CHECK(nr.residuals.back() <= 1e-10);
  CHECK(nr.iterations <= 10);
  const MetricData md = metric_from_potential({g, nr.phi.values});
  CHECK(md.ke_residual < 1e-9);
}

TEST_CASE("flow and Newton reach the same potential on a symmetric run") {
  const GeometryPtr g = fubini_study(1, 48);
  const Vec phi0 = initial_profile(g, "P2", 0.1);
  FlowOptions opt;
  opt.dt = 0.05;
  opt.t_max = 20.0;
  const FlowRun fr = run(g, phi0, opt);
  CHECK(fr.termination == Termination::converged_KE);
  const NewtonResult nr = newton_ke_solve(g, phi0);
  Vec d = fr.snapshots.back().phi.values - nr.phi.values;
  d.array() -= mean_reference(*g, d);
  CHECK(d.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("evolution identity residual is second order in dt") {
  const GeometryPtr g = fubini_study(1, 32);
  const Vec phi0 = initial_profile(g, "P2", 0.1);
  std::vector<double> res;
  for (double dt : {0.1, 0.05, 0.025}) {
    const FlowState s1 = advance(g, phi0, dt, 1.0 - dt, Scheme::semi_implicit);
    FlowState s2 = step(s1, dt, Scheme::semi_implicit).state;
    s2.t = 1.0;
    res.push_back(evolution_identity_residual(s1, s2));
  }
  CHECK(std::log2(res[0] / res[1]) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(std::log2(res[1] / res[2]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("termination names") {
  CHECK(std::string(to_string(Termination::converged_KE)) == "converged_KE");
  CHECK(std::string(to_string(Termination::stability_failure)) == "stability_failure");
  CHECK(std::string(to_string(Termination::admissibility_lost)) == "admissibility_lost");
}

TEST_CASE("invalid options are rejected") {
  const GeometryPtr g = fubini_study(1, 16);
  FlowOptions opt;
  opt.dt = -1.0;
  CHECK_THROWS(run(g, Vec::Zero(g->size()), opt));
}

#include "krf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>

#include "krf/catalog.hpp"
#include "krf/error.hpp"
#include "krf/estimates.hpp"
#include "krf/patches.hpp"

namespace krf {

bool VerifyReport::passed() const {
  for (const auto& e : entries)
    if (!e.passed) return false;
  return true;
}

std::string VerifyReport::text() const {
  std::string out = "seed " + std::to_string(seed) + "\n";
  char buf[256];
  int failed = 0;
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%s %s/%s residual=%.6e %s %.1e\n", e.passed ? "PASS" : "FAIL", e.suite.c_str(),
                  e.name.c_str(), e.residual, e.relation.c_str(), e.tolerance);
    out += buf;
    failed += e.passed ? 0 : 1;
  }
  std::snprintf(buf, sizeof buf, "%zu checks, %d failed\n", entries.size(), failed);
  out += buf;
  return out;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["passed"] = passed();
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries)
    j["entries"].push_back({{"suite", e.suite},
                            {"name", e.name},
                            {"passed", e.passed},
                            {"residual", e.residual},
                            {"relation", e.relation},
                            {"tolerance", e.tolerance}});
  return j;
}

namespace {

class Recorder {
 public:
  Recorder(VerifyReport& r, std::string suite) : r_(r), suite_(std::move(suite)) {}

  // Residual from `f` must be ≤ tol (≥ when `lower`). Exceptions become failures.
  void check(const std::string& name, double tol, const std::function<double()>& f, bool lower = false) {
    VerifyEntry e{suite_, name, false, NAN, tol, lower ? ">=" : "<="};
    try {
      e.residual = f();
      e.passed = lower ? e.residual >= tol : e.residual <= tol;
    } catch (const std::exception&) {
      e.passed = false;
    }
    r_.entries.push_back(std::move(e));
  }

 private:
  VerifyReport& r_;
  std::string suite_;
};

CVector random_point(int n, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  CVector z(n);
  for (int k = 0; k < n; ++k) z(k) = cplx(U(rng), U(rng)) * (radius / std::sqrt(2.0 * n));
  return z;
}

// Riemann coefficients pulled back by z = A w.
Tensor4 pull_back(const Tensor4& R, const CMatrix& A) {
  const int n = R.n;
  Tensor4 out(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          cplx s = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                  s += A(a, j) * std::conj(A(b, k)) * A(c, l) * std::conj(A(d, m)) * R(a, b, c, d);
          out(j, k, l, m) = s;
        }
  return out;
}

void tensor_suite(VerifyReport& rep, std::uint64_t seed) {
  Recorder rec(rep, "tensor");
  std::mt19937_64 rng(seed);

  rec.check("flat_chern_zero", 1e-12, [] {
    const MetricPatch p = flat_patch(2, 1.0, 3.0);
    return chern_coefficients(p, CVector::Zero(2)).max_abs();
  });
  for (int n : {1, 2}) {
    const CVector z = random_point(n, 0.8, rng);
    rec.check("fs_scalar_cp" + std::to_string(n), 1e-8, [&] {
      return std::abs(scalar_curvature(fubini_study_patch(n), z) - 2.0 * n);
    });
    rec.check("fs_ricci_equals_metric_cp" + std::to_string(n), 1e-8, [&] {
      const MetricPatch p = fubini_study_patch(n);
      return (ricci_form(p, z) - p.eval(z)).cwiseAbs().maxCoeff();
    });
  }
  for (int trial = 0; trial < 3; ++trial) {
    const PolynomialPotential pp = random_polynomial_potential(2, 0.2, rng());
    const MetricPatch patch = polynomial_kahler_patch(pp, 0.5);
    const CVector z = random_point(2, 0.3, rng);
    const std::string tag = "_" + std::to_string(trial);
    rec.check("riemann_symmetry" + tag, 1e-8, [&] { return riemann_symmetry_defect(riemann_coefficients(patch, z)); });
    rec.check("ricci_routes_agree" + tag, 1e-8, [&] {
      const CurvatureBundle b = curvature_bundle(patch, z);
      return (ricci_from_chern(b.chern) - b.ricci).cwiseAbs().maxCoeff();
    });
    rec.check("ricci_hermitian" + tag, 1e-10, [&] { return hermitian_defect(ricci_form(patch, z)); });
    rec.check("normal_form_H2" + tag, 1e-8, [&] {
      const NormalForm nf = geodesic_normal_form(patch, z, 2);
      const Tensor4 Rw = pull_back(riemann_coefficients(patch, z), nf.A);
      double d = 0.0;
      for (size_t i = 0; i < Rw.data.size(); ++i) d = std::max(d, std::abs(nf.H2.data[i] + 2.0 * Rw.data[i]));
      return d;
    });
    rec.check("volume_density_third_order" + tag, 4.0, [&] {
      const NormalForm nf = geodesic_normal_form(patch, z, 2);
      const double r1 = volume_density_expansion_check(patch, nf, 0.04);
      const double r2 = volume_density_expansion_check(patch, nf, 0.02);
      return r2 / std::max(r1, 1e-300);
    });
  }
  for (int n : {1, 2}) {
    const GeometryPtr g = fubini_study(n, 64);
    const Vec phi = random_admissible_potential(g, rng(), 0.4, 0.9, 4);
    rec.check("tensor_route_scalar_cp" + std::to_string(n), 1e-6, [&] {
      const MetricData md = metric_from_potential({g, phi});
      return (tensor_scalar_field(g, phi) - md.scal).cwiseAbs().maxCoeff();
    });
    rec.check("parallel_matches_serial_cp" + std::to_string(n), 0.0, [&] {
      return (c3_field(g, phi, Execution::parallel) - c3_field(g, phi, Execution::serial)).cwiseAbs().maxCoeff();
    });
  }
}

void functional_suite(VerifyReport& rep, std::uint64_t seed) {
  Recorder rec(rep, "functional");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int n : {1, 2}) {
    const GeometryPtr g = fubini_study(n, 64);
    const std::string cp = "_cp" + std::to_string(n);
    rec.check("lambda1_fs" + cp, 1e-8, [&] {
      const MetricData md = reference_metric(g);
      return std::abs(first_eigenvalue(md, Vec::Zero(g->size())).lambda1 - 2.0);
    });
    for (int trial = 0; trial < 3; ++trial) {
      const std::string tag = cp + "_" + std::to_string(trial);
      const Vec phi = random_admissible_potential(g, rng(), 0.4, 0.9, 4);
      const MetricData md = metric_from_potential({g, phi});
      const Vec h = ricci_potential(md).h.values;
      rec.check("lambda1_ge_2" + tag, 2.0 - 1e-6, [&] { return first_eigenvalue(md, h).lambda1; }, true);
      rec.check("poincare" + tag, -1e-8, [&] { return poincare_residual(md, h, random_test_function(g, rng())); }, true);
      rec.check("bochner_kodaira" + tag, 1e-7, [&] {
        return bochner_kodaira_residual(md, random_test_function(g, rng()), random_test_function(g, rng(), 3));
      });
      rec.check("aubin_I_nonnegative" + tag, -1e-12, [&] { return aubin_I_J(md).I; }, true);
      rec.check("aubin_I_le_n1_J" + tag, -1e-12, [&] {
        const AubinValues a = aubin_I_J(md);
        return (n + 1) * a.J - a.I;
      }, true);
      rec.check("aubin_dual_forms" + tag, 1e-8, [&] {
        const AubinValues a = aubin_I_J(md);
        return std::max(a.I_defect(), a.J_defect());
      });
      rec.check("k_energy_derivative" + tag, 1e-6, [&] {
        const Vec v = random_test_function(g, rng());
        const double e = 1e-3;
        auto nu = [&](double s) { return k_energy(metric_from_potential({g, phi + s * v})); };
        const double fd = (8.0 * (nu(e) - nu(-e)) - (nu(2 * e) - nu(-2 * e))) / (12.0 * e);
        const double an = k_energy_derivative(md, v);
        return std::abs(fd - an) / std::max(1.0, std::abs(an));
      });
      rec.check("ricci_potential_ddbar" + tag, 1e-8, [&] { return ricci_ddbar_residual(md, h); });
    }
  }
}

void flow_suite(VerifyReport& rep, std::uint64_t seed) {
  Recorder rec(rep, "flow");
  std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dULL);
  for (int n : {1, 2}) {
    const std::string cp = "_cp" + std::to_string(n);
    const GeometryPtr g = fubini_study(n, 48);
    const Vec phi0 = random_admissible_potential(g, rng(), 0.5, 0.9, 4);
    FlowOptions opt;
    opt.dt = 0.05;
    opt.t_max = 3.0;
    opt.stop_on_convergence = false;
    double norm = 0.0, ident = 0.0, eq = 0.0;
    bool ok = true;
    FlowRun fr;
    try {
      fr = run(g, phi0, opt, [&](const FlowState& s) {
        norm = std::max(norm, normalization_defect(s));
        ident = std::max(ident, ricci_constants_defect(s));
        eq = std::max(eq, flow_equation_defect(s));
      });
    } catch (const std::exception&) {
      ok = false;
    }
    const bool finished = ok && fr.termination != Termination::stability_failure &&
                          fr.termination != Termination::admissibility_lost;
    rec.check("run_completes" + cp, 0.0, [&] { return finished ? 0.0 : 1.0; });
    if (!finished) continue;
    rec.check("normalization" + cp, 1e-12, [&] { return norm; });
    rec.check("W_plus_a_plus_n" + cp, 1e-8, [&] { return ident; });
    rec.check("flow_equation" + cp, 1e-10, [&] { return eq; });
    const MonotonicityReport m = check_monotonicity(fr.steps);
    rec.check("nu_nonincreasing" + cp, 0.0, [&] { return m.nu_worst; });
    rec.check("W_nondecreasing" + cp, 0.0, [&] { return m.W_worst; });
    rec.check("a_nonincreasing" + cp, 0.0, [&] { return m.a_worst; });
  }
  // Order of the evolution identity residual on [1 − dt, 1].
  const GeometryPtr g = fubini_study(1, 32);
  const Vec phi0 = initial_profile(g, "P2", 0.1);
  rec.check("evolution_identity_order", 1.7, [&] {
    std::vector<double> res;
    for (double dt : {0.1, 0.05}) {
      FlowState s = make_state(g, phi0);
      const int steps = static_cast<int>(std::lround(1.0 / dt));
      for (int k = 1; k < steps; ++k) {
        s = step(s, dt, Scheme::semi_implicit).state;
        s.t = k * dt;
      }
      FlowState s2 = step(s, dt, Scheme::semi_implicit).state;
      s2.t = 1.0;
      res.push_back(evolution_identity_residual(s, s2));
    }
    return std::log2(res[0] / res[1]);
  }, true);
}

void estimates_suite(VerifyReport& rep, std::uint64_t seed) {
  Recorder rec(rep, "estimates");
  std::mt19937_64 rng(seed ^ 0xbf58476d1ce4e5b9ULL);
  for (int n : {1, 2}) {
    const std::string cp = "_cp" + std::to_string(n);
    const GeometryPtr g = fubini_study(n, 64);
    const Vec lam = reference_lambda1_field(g);
    for (int trial = 0; trial < 3; ++trial) {
      const std::string tag = cp + "_" + std::to_string(trial);
      const FlowState s = make_state(g, random_admissible_potential(g, rng(), 0.4, 0.9, 4));
      const YauTerms y = yau_c2_terms(s.metric, lam);
      rec.check("yau_c2" + tag, -1e-6, [&] { return y.residual.minCoeff(); }, true);
      rec.check("c3_cauchy_schwarz" + tag, -1e-6, [&] { return y.cauchy_schwarz.minCoeff(); }, true);
      rec.check("theta_dirichlet" + tag, -1e-8, [&] { return theta_moment_chain(s.metric).min_residual(); }, true);
      rec.check("density_algebraic" + tag, 1e-10, [&] { return density_ratio(s).relative_disagreement(); });
    }
    const FlowState fs = make_state(g, Vec::Zero(g->size()));
    rec.check("fs_sup_scal" + cp, 1e-8, [&] { return std::abs(perelman_monitor(fs).sup_scal - 2.0 * n); });
    rec.check("fs_sup_u" + cp, 1e-10, [&] { return perelman_monitor(fs).sup_u; });
    rec.check("fs_lambda1_field" + cp, 1e-10, [&] {
      return (lam.array() - (n == 1 ? 0.5 : 0.0)).abs().maxCoeff();
    });
  }
  rec.check("fs_diameter_cp1", 1e-10, [] {
    return std::abs(perelman_monitor(make_state(fubini_study(1, 64), Vec::Zero(65))).diam - M_PI);
  });
}

}  // namespace

VerifyReport verify(const std::string& suite, std::uint64_t seed) {
  if (suite != "all" && std::find(kVerifySuites.begin(), kVerifySuites.end(), suite) == kVerifySuites.end())
    throw std::invalid_argument("unknown suite '" + suite + "'");
  VerifyReport rep;
  rep.seed = seed;
  if (suite == "all" || suite == "tensor") tensor_suite(rep, seed);
  if (suite == "all" || suite == "functional") functional_suite(rep, seed);
  if (suite == "all" || suite == "flow") flow_suite(rep, seed);
  if (suite == "all" || suite == "estimates") estimates_suite(rep, seed);
  return rep;
}

}  // namespace krf

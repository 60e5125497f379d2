#include "krf/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>

#include "krf/catalog.hpp"
#include "krf/error.hpp"
#include "krf/estimates.hpp"
#include "krf/io.hpp"

namespace krf {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path resolve_output_directory(const RunConfig& c) {
  fs::path dir(c.output_directory);
  const char* root = std::getenv("KRF_OUTPUT_ROOT");
  if (root && *root && dir.is_relative()) dir = fs::path(root) / dir;
  return dir;
}

Vec initial_potential(const RunConfig& c, const GeometryPtr& geom) {
  if (c.initial.kind == "zero") return Vec::Zero(geom->size());
  if (c.initial.kind == "perturbation") return initial_profile(geom, c.initial.profile, c.initial.amplitude);
  SnapshotData d;
  try {
    d = read_snapshot(c.initial.path);
  } catch (const Error& e) {
    throw ConfigError(std::string("config: 'initial_potential.path': ") + e.what(), "initial_potential.path");
  }
  if (d.n != c.n)
    throw ConfigError("config: 'initial_potential.path' holds a potential on CP^" + std::to_string(d.n) +
                          ", expected CP^" + std::to_string(c.n),
                      "initial_potential.path");
  return resample(d.phi, geom);
}

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

std::string snapshot_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06d.json", index);
  return buf;
}

json failure_json(const SuiteFailure& f) {
  return {{"suite", f.suite}, {"invariant", f.invariant}, {"t", f.t}, {"measured", f.measured},
          {"tolerance", f.tolerance}};
}

class RunWriter {
 public:
  RunWriter(const RunConfig& c, fs::path dir) : cfg_(c), dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_ / "snapshots", ec);
    if (ec) throw Error("cannot create output directory '" + dir_.string() + "': " + ec.message());
    // Clear artifacts of an earlier run in the same place; nothing else is touched.
    fs::remove(dir_ / "timeseries.csv", ec);
    for (const auto& e : fs::directory_iterator(dir_ / "snapshots"))
      if (e.path().filename().string().rfind("snap_", 0) == 0) fs::remove(e.path(), ec);

    manifest_["format_version"] = 1;
    manifest_["csv_version"] = kCsvVersion;
    manifest_["csv_columns"] = std::vector<std::string>(kCsvColumns.begin(), kCsvColumns.end());
    manifest_["config"] = to_json(c);
    manifest_["monitor_parameters"] = {{"oscillation_eps", 0.5}, {"oscillation_delta", 0.5}, {"theta_moments", 12}};
    manifest_["status"] = "running";
    manifest_["snapshots"] = json::array();
    manifest_["last_durable_snapshot"] = nullptr;
    append_line(dir_ / "timeseries.csv", csv_header());
    write_manifest();
  }

  void snapshot(const FlowState& s, const CsvRow& row, const json& residuals) {
    const std::string name = snapshot_name(count_);
    write_atomic(dir_ / "snapshots" / name, snapshot_json(s, residuals).dump(1) + "\n");
    append_line(dir_ / "timeseries.csv", csv_row(row));
    const json entry = {{"index", count_}, {"t", s.t}, {"file", "snapshots/" + name}};
    manifest_["snapshots"].push_back(entry);
    manifest_["last_durable_snapshot"] = entry;
    ++count_;
    write_manifest();
  }

  json& manifest() { return manifest_; }
  void write_manifest() { write_atomic(dir_ / "manifest.json", manifest_.dump(2) + "\n"); }

 private:
  const RunConfig& cfg_;
  fs::path dir_;
  json manifest_;
  int count_ = 0;
};

class SuiteLog {
 public:
  explicit SuiteLog(const RunConfig& c) : cfg_(c) {}

  // Records `measured ≤ tolerance` (or ≥ when `lower` is set).
  void check(const std::string& suite, const std::string& name, double t, double measured, double tol,
             bool lower = false) {
    if (!cfg_.monitor(suite)) return;
    auto& s = stats_[suite + "/" + name];
    const bool ok = lower ? measured >= tol : measured <= tol;
    if (!s.seen || (lower ? measured < s.worst : measured > s.worst)) s.worst = measured;
    s.seen = true;
    s.tol = tol;
    s.lower = lower;
    // One report entry per invariant: the first time it fails.
    if (!ok && !s.failed) {
      s.failed = true;
      failures.push_back({suite, name, t, measured, tol});
    }
  }

  json summary() const {
    json out = json::object();
    for (const std::string& suite : kKnownMonitors) {
      json entry = {{"enabled", cfg_.monitor(suite)}};
      bool passed = true;
      json inv = json::object();
      for (const auto& [key, s] : stats_) {
        if (key.rfind(suite + "/", 0) != 0) continue;
        const bool ok = !s.failed;
        passed = passed && ok;
        inv[key.substr(suite.size() + 1)] = {{"worst", s.worst}, {"tolerance", s.tol}, {"passed", ok}};
      }
      if (cfg_.monitor(suite)) {
        entry["passed"] = passed;
        entry["invariants"] = inv;
      }
      out[suite] = entry;
    }
    return out;
  }

  std::vector<SuiteFailure> failures;

 private:
  struct Stat {
    bool seen = false, lower = false, failed = false;
    double worst = 0.0, tol = 0.0;
  };
  const RunConfig& cfg_;
  std::map<std::string, Stat> stats_;
};

}  // namespace

RunOutcome execute(const RunConfig& c) {
  RunOutcome out;
  out.directory = resolve_output_directory(c);
  const GeometryPtr geom = fubini_study(c.n, c.N);
  const Vec phi0 = initial_potential(c, geom);

  RunWriter writer(c, out.directory);
  SuiteLog log(c);
  const double tol_inv = c.tolerances.invariant;
  const bool want_estimates = c.monitor("estimates");
  const bool want_spectrum = c.monitor("spectrum");
  const Vec lambda_ref = want_estimates ? reference_lambda1_field(geom) : Vec();

  auto on_snapshot = [&](const FlowState& s) {
    const MetricData& md = s.metric;
    const Vec& u = s.u.values;
    CsvRow row;
    row.fill(nan_v);
    const AubinValues aj = aubin_I_J(md);
    const PerelmanBounds pb = perelman_monitor(s);
    const RicciConstants rc = ricci_potential_constants(s);
    row[0] = s.t;
    row[1] = s.c;
    row[2] = s.a;
    row[3] = rc.W;
    row[4] = aj.I;
    row[5] = aj.J;
    row[6] = k_energy(md);
    row[9] = pb.sup_u;
    row[10] = pb.sup_grad_u;
    row[11] = pb.sup_lap_u;
    row[12] = pb.sup_scal;
    row[13] = pb.diam;
    row[14] = md.f.minCoeff();
    row[17] = md.ke_residual;
    row[18] = soliton_residual(s);

    json res;
    res["normalization"] = normalization_defect(s);
    res["flow_equation"] = flow_equation_defect(s);
    res["W_plus_a_plus_n"] = ricci_constants_defect(s);
    res["k_energy_identity"] = std::abs(k_energy_flow_identity(md, u, s.c));
    res["ricci_potential_identity"] = ricci_potential_identity_residual(md, u);
    res["aubin_dual_I"] = aj.I_defect();
    res["aubin_dual_J"] = aj.J_defect();
    res["ke_residual"] = md.ke_residual;

    log.check("normalization", "normalization_defect", s.t, res["normalization"], c.tolerances.normalization);
    log.check("identities", "flow_equation", s.t, res["flow_equation"], tol_inv);
    log.check("identities", "W_plus_a_plus_n", s.t, res["W_plus_a_plus_n"], tol_inv);
    log.check("identities", "k_energy_identity", s.t, res["k_energy_identity"], tol_inv);
    log.check("identities", "ricci_potential_identity", s.t, res["ricci_potential_identity"], tol_inv);
    log.check("identities", "aubin_dual_forms", s.t, std::max(aj.I_defect(), aj.J_defect()), tol_inv);
    log.check("identities", "aubin_I_nonnegative", s.t, aj.I, -tol_inv, true);
    log.check("identities", "aubin_I_le_n1_J", s.t, (c.n + 1) * aj.J - aj.I, -tol_inv, true);

    if (want_spectrum) {
      const ScalarField h = convert_ricci_potential(s.u, FieldRole::ricci_potential);
      row[7] = first_eigenvalue(md, h.values).lambda1;
      row[8] = futaki_pairing(md, convert_ricci_potential(s.u, FieldRole::soliton_potential));
      res["lambda1"] = row[7];
      log.check("spectrum", "lambda1_ge_2", s.t, row[7], 2.0 - kLambda1Tolerance, true);
    }
    if (want_estimates) {
      const MonitorRecord mr = monitor(s, lambda_ref);
      const DensityRatio dr = density_ratio(s);
      row[15] = mr.c2_residual;
      row[16] = mr.c3_norm;
      res["c2_residual"] = mr.c2_residual;
      res["cauchy_schwarz"] = mr.cs_residual;
      res["theta_min_residual"] = mr.theta.min_residual();
      res["density_disagreement"] = dr.relative_disagreement();
      res["theta_moments"] = mr.theta.moments;
      res["theta_ratios"] = mr.theta.ratios;
      res["oscillation"] = mr.osc.osc;
      res["lp_norm"] = mr.osc.lp_norm;
      log.check("estimates", "yau_c2", s.t, mr.c2_residual, -kYauTolerance, true);
      log.check("estimates", "c3_cauchy_schwarz", s.t, mr.cs_residual, -kYauTolerance, true);
      log.check("estimates", "theta_dirichlet", s.t, mr.theta.min_residual(), -kThetaTolerance, true);
      log.check("estimates", "density_positive", s.t, dr.min, 0.0, true);
      log.check("estimates", "density_algebraic", s.t, dr.relative_disagreement(), kDensityAgreement);
      log.check("estimates", "trace_positive", s.t, mr.c2_trace_min, 0.0, true);
    }
    writer.snapshot(s, row, res);
  };

  FlowRun fr;
  bool aborted = false;
  try {
    fr = run(geom, phi0, c.flow_options(), on_snapshot);
  } catch (const Error& e) {
    aborted = true;
    out.message = e.what();
  }

  json& m = writer.manifest();
  if (aborted) {
    out.termination = "aborted";
    out.exit_code = kExitSolver;
  } else {
    out.termination = to_string(fr.termination);
    out.message = fr.message;
    const MonotonicityReport mono = check_monotonicity(fr.steps);
    if (c.monitor("monotonicity")) {
      log.check("monotonicity", "nu_nonincreasing", fr.steps.back().t, mono.nu_worst, 0.0);
      log.check("monotonicity", "W_nondecreasing", fr.steps.back().t, mono.W_worst, 0.0);
      log.check("monotonicity", "a_nonincreasing", fr.steps.back().t, mono.a_worst, 0.0);
      m["monotonicity"] = {{"nu_nonincreasing", mono.nu_ok},   {"W_nondecreasing", mono.W_ok},
                           {"a_nonincreasing", mono.a_ok},     {"nu_worst_margin", mono.nu_worst},
                           {"W_worst_margin", mono.W_worst},   {"a_worst_margin", mono.a_worst},
                           {"steps", fr.steps.size()}};
    }
    const bool solver_failed =
        fr.termination == Termination::stability_failure || fr.termination == Termination::admissibility_lost;
    out.exit_code = solver_failed ? kExitSolver : (log.failures.empty() ? kExitPass : kExitInvariant);
  }
  out.failures = log.failures;
  m["status"] = aborted ? "aborted" : "complete";
  m["termination"] = out.termination;
  m["message"] = out.message;
  m["suites"] = log.summary();
  json fails = json::array();
  for (const auto& f : out.failures) fails.push_back(failure_json(f));
  m["failures"] = fails;
  m["exit_code"] = out.exit_code;
  writer.write_manifest();
  out.manifest = m;
  return out;
}

json inspect(const fs::path& path) {
  const SnapshotData d = read_snapshot(path);
  const GeometryPtr geom = fubini_study(d.n, d.N);
  if ((geom->x() - d.x).cwiseAbs().maxCoeff() > 1e-14)
    throw Error("snapshot '" + path.string() + "' uses an unexpected grid");
  FlowState s = make_state(geom, d.phi, d.t);
  json r;
  r["file"] = path.string();
  r["n"] = d.n;
  r["N"] = d.N;
  r["t"] = d.t;
  r["c"] = {{"stored", d.c}, {"recomputed", s.c}};
  r["a"] = {{"stored", d.a}, {"recomputed", s.a}};
  r["u_deviation"] = (s.u.values - d.u).cwiseAbs().maxCoeff();
  r["density_min"] = s.metric.f.minCoeff();
  r["min_relative_eigenvalue"] = std::min(s.metric.r.minCoeff(), d.n > 1 ? s.metric.tau.minCoeff() : INFINITY);
  r["normalization_defect"] = normalization_defect(s);
  r["W_plus_a_plus_n"] = ricci_constants_defect(s);
  r["ke_residual"] = s.metric.ke_residual;
  r["stored_residuals"] = d.residuals;
  return r;
}

}  // namespace krf

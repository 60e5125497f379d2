#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "krf/error.hpp"
#include "krf/io.hpp"
#include "krf/runner.hpp"
#include "krf/verify.hpp"

using namespace krf;
namespace fs = std::filesystem;

namespace {

fs::path tmp_root() {
  const char* t = std::getenv("KRF_TEST_TMP");
  fs::path p = t ? fs::path(t) : fs::temp_directory_path() / "krf_test_runner";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig config_in(const std::string& name, const std::string& body) {
  RunConfig c = parse_config(body);
  c.output_directory = (tmp_root() / name).string();
  return c;
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected ConfigError for " << text);
  return ConfigError("", "");
}

int shell(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const RunConfig c = parse_config(R"({"n": 1, "N": 64, "dt": 0.01, "t_max": 5})");
  CHECK(c.n == 1);
  CHECK(c.N == 64);
  CHECK(c.dt == 0.01);
  CHECK(c.t_max == 5.0);
  CHECK(c.format_version == kConfigFormatVersion);
  CHECK(c.scheme == Scheme::semi_implicit);
  CHECK(c.initial.kind == "zero");
  CHECK(c.tolerances.normalization == 1e-10);
  CHECK(c.monitors == kKnownMonitors);
  CHECK(c.snapshot_stride == 1);
  const nlohmann::json j = to_json(c);
  CHECK(j["geometry"]["N"] == 64);
  CHECK(j["scheme"] == "semi-implicit");
  // the echoed config parses back to the same thing
  const RunConfig back = parse_config(j.dump());
  CHECK(to_json(back) == j);
}

TEST_CASE("validation errors name the field and line") {
  const ConfigError neg = config_error("{\n \"n\": 1,\n \"N\": 64,\n \"dt\": -1,\n \"t_max\": 5\n}");
  CHECK(neg.key == "dt");
  CHECK(neg.line == 4);
  CHECK(std::string(neg.what()).find("dt") != std::string::npos);

  const ConfigError unk = config_error(R"({"n": 1, "N": 64, "dt": 0.1, "t_max": 5, "foo": 1})");
  CHECK(unk.key == "foo");
  CHECK(std::string(unk.what()).find("not a recognized key") != std::string::npos);

  CHECK(config_error(R"({"n": 1, "N": 64, "dt": 0.1, "t_max": 5, "tolerances": {"normalisation": 1}})").key ==
        "tolerances.normalisation");
  CHECK(config_error(R"({"n": 1, "N": 8, "dt": 0.1, "t_max": 5})").key == "N");
  CHECK(config_error(R"({"n": 1, "N": 64, "dt": "fast", "t_max": 5})").key == "dt");
  CHECK(config_error(R"({"n": 1, "N": 64, "dt": 0.1})").key == "t_max");
  CHECK(config_error(R"({"format_version": 2, "n": 1, "N": 64, "dt": 0.1, "t_max": 1})").key == "format_version");
  CHECK(config_error(R"({"n": 1, "N": 64, "dt": 0.1, "t_max": 1, "scheme": "euler"})").key == "scheme");
  CHECK(config_error(R"({"n": 1, "N": 64, "dt": 0.1, "t_max": 1, "monitors": ["bogus"]})").key == "monitors");
  CHECK(config_error(R"({"geometry": {"n": 1, "N": 64}, "n": 1, "dt": 0.1, "t_max": 1})").key == "geometry");
  CHECK(config_error(R"({"n": 1, "N": 64, "dt": 0.1, "t_max": 1,
                         "initial_potential": {"kind": "perturbation", "profile": "Q7"}})")
            .key == "initial_potential.profile");
  CHECK(config_error("{\"n\": 1,\n\"N\": }").line == 2);
}

TEST_CASE("Fubini-Study run exits 0 and reports convergence") {
  const RunConfig c = config_in("fs", R"({"n": 1, "N": 32, "dt": 0.05, "t_max": 2})");
  const RunOutcome out = execute(c);
  CHECK(out.exit_code == kExitPass);
  CHECK(out.termination == "converged_KE");
  const auto m = nlohmann::json::parse(slurp(out.directory / "manifest.json"));
  CHECK(m["termination"] == "converged_KE");
  CHECK(m["status"] == "complete");
  CHECK(m["config"]["dt"] == 0.05);
  CHECK(m["csv_columns"].size() == kCsvColumns.size());
  CHECK(fs::exists(out.directory / m["last_durable_snapshot"]["file"].get<std::string>()));
}

TEST_CASE("perturbed run with the monotonicity suite") {
  const RunConfig c = config_in("mono", R"({"n": 1, "N": 48, "dt": 0.05, "t_max": 3,
      "initial_potential": {"kind": "perturbation", "profile": "P2", "amplitude": 0.2},
      "stop_on_convergence": false, "output": {"directory": "x", "snapshot_stride": 4}})");
  const RunOutcome out = execute(c);
  CHECK(out.exit_code == kExitPass);
  const auto m = nlohmann::json::parse(slurp(out.directory / "manifest.json"));
  CHECK(m["monotonicity"]["nu_nonincreasing"] == true);
  CHECK(m["monotonicity"]["W_nondecreasing"] == true);
  CHECK(m["monotonicity"]["a_nonincreasing"] == true);
  CHECK(m["suites"]["monotonicity"]["passed"] == true);
  // 60 steps with stride 4: t = 0, 0.2, ..., 3
  CHECK(m["snapshots"].size() == 16);
  const std::string csv = slurp(out.directory / "timeseries.csv");
  CHECK(csv.substr(0, csv.find('\n')) == csv_header());
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
}

TEST_CASE("sabotaged tolerance gives a controlled failure") {
  const RunConfig c = config_in("sabotage", R"({"n": 1, "N": 32, "dt": 0.05, "t_max": 0.5,
      "initial_potential": {"kind": "perturbation", "profile": "P2", "amplitude": 0.1},
      "tolerances": {"normalization": 1e-20}})");
  const RunOutcome out = execute(c);
  CHECK(out.exit_code == kExitInvariant);
  REQUIRE(out.failures.size() == 1);
  CHECK(out.failures[0].suite == "normalization");
  const auto m = nlohmann::json::parse(slurp(out.directory / "manifest.json"));
  CHECK(m["exit_code"] == kExitInvariant);
  CHECK(m["failures"][0]["invariant"] == "normalization_defect");
  CHECK(m["suites"]["normalization"]["passed"] == false);
}

TEST_CASE("solver failure keeps partial artifacts") {
  const RunConfig c = config_in("unstable", R"({"n": 1, "N": 48, "dt": 1.0, "t_max": 5, "scheme": "rk4",
      "initial_potential": {"kind": "perturbation", "profile": "P2", "amplitude": 0.2}})");
  const RunOutcome out = execute(c);
  CHECK(out.exit_code == kExitSolver);
  CHECK(out.termination == "stability_failure");
  const auto m = nlohmann::json::parse(slurp(out.directory / "manifest.json"));
  CHECK(m["last_durable_snapshot"]["index"] == 0);
  CHECK(fs::exists(out.directory / "snapshots" / "snap_000000.json"));
}

TEST_CASE("identical config gives bit-identical CSV") {
  const std::string body = R"({"n": 2, "N": 32, "dt": 0.1, "t_max": 1,
      "initial_potential": {"kind": "perturbation", "profile": "skew", "amplitude": 0.1}})";
  const RunOutcome a = execute(config_in("det_a", body));
  const RunOutcome b = execute(config_in("det_b", body));
  CHECK(slurp(a.directory / "timeseries.csv") == slurp(b.directory / "timeseries.csv"));
}

TEST_CASE("initial potential from a snapshot file, resampled") {
  const RunOutcome src = execute(config_in("src", R"({"n": 1, "N": 32, "dt": 0.1, "t_max": 0.5,
      "initial_potential": {"kind": "perturbation", "profile": "P2", "amplitude": 0.1}})"));
  const fs::path snap = src.directory / "snapshots" / "snap_000005.json";
  REQUIRE(fs::exists(snap));
  RunConfig c = config_in("from_file", R"({"n": 1, "N": 48, "dt": 0.1, "t_max": 0.2,
      "initial_potential": {"kind": "file", "path": "unused"}})");
  c.initial.path = snap.string();
  const GeometryPtr g = fubini_study(1, 48);
  const Vec phi = initial_potential(c, g);
  const SnapshotData d = read_snapshot(snap);
  CHECK(phi.size() == 49);
  CHECK(ChebyshevGrid(32).interpolate(d.phi, 0.3) == doctest::Approx(ChebyshevGrid(48).interpolate(phi, 0.3)));
  CHECK(execute(c).exit_code == kExitPass);
}

TEST_CASE("inspect recomputes stored quantities") {
  const RunOutcome out = execute(config_in("insp", R"({"n": 2, "N": 32, "dt": 0.1, "t_max": 0.3,
      "initial_potential": {"kind": "perturbation", "profile": "P2", "amplitude": 0.1}})"));
  const auto r = inspect(out.directory / "snapshots" / "snap_000003.json");
  CHECK(r["t"].get<double>() == doctest::Approx(0.3));
  CHECK(r["u_deviation"].get<double>() < 1e-12);
  CHECK(r["c"]["stored"] == r["c"]["recomputed"]);
  CHECK_THROWS_AS(inspect(out.directory / "missing.json"), Error);
}

TEST_CASE("output root override") {
  const fs::path root = tmp_root() / "override_root";
  ::setenv("KRF_OUTPUT_ROOT", root.string().c_str(), 1);
  RunConfig c = parse_config(R"({"n": 1, "N": 16, "dt": 0.1, "t_max": 0.1, "output": {"directory": "rel"}})");
  CHECK(resolve_output_directory(c) == root / "rel");
  c.output_directory = "/abs/elsewhere";
  CHECK(resolve_output_directory(c) == fs::path("/abs/elsewhere"));
  ::unsetenv("KRF_OUTPUT_ROOT");
}

TEST_CASE("verify reports are deterministic per seed") {
  const VerifyReport a = verify("tensor", 1);
  const VerifyReport b = verify("tensor", 1);
  CHECK(a.passed());
  CHECK(a.text() == b.text());
  const VerifyReport f = verify("functional", 3);
  CHECK(f.passed());
  for (const auto& e : f.entries) CHECK(e.suite == "functional");
  CHECK_THROWS_AS(verify("nonsense", 1), std::invalid_argument);
}

TEST_CASE("command-line exit codes and crash safety") {
  const char* bin = std::getenv("KRF_BIN");
  if (!bin) {
    MESSAGE("KRF_BIN not set; skipping CLI checks");
    return;
  }
  const fs::path dir = tmp_root() / "cli";
  fs::create_directories(dir);
  const std::string krflab = std::string("\"") + bin + "\"";
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir / name) << body;
    return (dir / name).string();
  };
  const std::string quiet = " > /dev/null 2>&1";

  CHECK(shell(krflab + " run " + write("bad.json", R"({"n": 1, "N": 64, "dt": -1, "t_max": 1})") + quiet) ==
        kExitConfig);
  CHECK(shell(krflab + " run " + (dir / "absent.json").string() + quiet) == kExitConfig);
  CHECK(shell(krflab + " verify nonsense" + quiet) == kExitConfig);
  CHECK(shell(krflab + " verify tensor --seed 1 > " + (dir / "v1.txt").string()) == kExitPass);
  CHECK(shell(krflab + " verify tensor --seed 1 > " + (dir / "v2.txt").string()) == kExitPass);
  CHECK(slurp(dir / "v1.txt") == slurp(dir / "v2.txt"));

  const std::string good = write("good.json", R"({"n": 1, "N": 32, "dt": 0.1, "t_max": 0.5,
      "initial_potential": {"kind": "perturbation", "profile": "P2", "amplitude": 0.1},
      "output": {"directory": ")" + (dir / "good_run").string() + R"("}})");
  CHECK(shell(krflab + " run " + good + quiet) == kExitPass);
  CHECK(shell(krflab + " inspect " + (dir / "good_run" / "snapshots" / "snap_000002.json").string() + quiet) ==
        kExitPass);

  // Kill a long run mid-flight: the manifest must still parse and name a
  // snapshot that exists and is complete.
  const std::string longrun = write("long.json", R"({"n": 2, "N": 96, "dt": 0.002, "t_max": 100,
      "initial_potential": {"kind": "perturbation", "profile": "P2", "amplitude": 0.1},
      "stop_on_convergence": false,
      "output": {"directory": ")" + (dir / "killed").string() + R"("}})");
  shell("timeout -s KILL 2 " + krflab + " run " + longrun + quiet);
  const auto m = nlohmann::json::parse(slurp(dir / "killed" / "manifest.json"));
  CHECK(m["status"] == "running");
  REQUIRE(m["last_durable_snapshot"].is_object());
  const SnapshotData d = read_snapshot(dir / "killed" / m["last_durable_snapshot"]["file"].get<std::string>());
  CHECK(d.t == doctest::Approx(m["last_durable_snapshot"]["t"].get<double>()));
}

// krflab: run normalized Kähler–Ricci flow experiments on CPⁿ, verify the
// invariant suites, and inspect snapshots.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "krf/error.hpp"
#include "krf/runner.hpp"
#include "krf/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Kähler–Ricci flow laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Execute a flow run described by a JSON config");
  run_cmd->add_option("config", config_path, "Path to the run config")->required();

  std::string suite = "all";
  std::uint64_t seed = 1;
  bool as_json = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run an invariant suite (tensor, functional, flow, estimates, all)");
  verify_cmd->add_option("suite", suite, "Suite name")->required();
  verify_cmd->add_option("--seed", seed, "Seed for randomized checks");
  verify_cmd->add_flag("--json", as_json, "Print the report as JSON");

  std::string snapshot_path;
  auto* inspect_cmd = app.add_subcommand("inspect", "Recompute and summarize a stored snapshot");
  inspect_cmd->add_option("snapshot", snapshot_path, "Path to snapshots/snap_NNNNNN.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : krf::kExitConfig;
  }

  if (*run_cmd) {
    krf::RunConfig cfg;
    try {
      cfg = krf::load_config(config_path);
    } catch (const krf::ConfigError& e) {
      std::cerr << e.what() << "\n";
      return krf::kExitConfig;
    }
    try {
      const krf::RunOutcome out = krf::execute(cfg);
      std::cout << "termination: " << out.termination << "\n";
      if (!out.message.empty()) std::cout << "message: " << out.message << "\n";
      for (const auto& f : out.failures)
        std::printf("FAIL %s/%s at t=%.6g: measured %.6e, tolerance %.1e\n", f.suite.c_str(), f.invariant.c_str(),
                    f.t, f.measured, f.tolerance);
      std::cout << "output: " << out.directory.string() << "\n";
      return out.exit_code;
    } catch (const krf::ConfigError& e) {
      std::cerr << e.what() << "\n";
      return krf::kExitConfig;
    } catch (const krf::Error& e) {
      // Unwritable output directory and similar environment problems.
      std::cerr << "error: " << e.what() << "\n";
      return krf::kExitConfig;
    }
  }

  if (*verify_cmd) {
    krf::VerifyReport rep;
    try {
      rep = krf::verify(suite, seed);
    } catch (const std::invalid_argument& e) {
      std::cerr << e.what() << "\n";
      return krf::kExitConfig;
    }
    if (as_json)
      std::cout << rep.to_json().dump(2) << "\n";
    else
      std::cout << rep.text();
    return rep.passed() ? krf::kExitPass : krf::kExitInvariant;
  }

  if (*inspect_cmd) {
    try {
      std::cout << krf::inspect(snapshot_path).dump(2) << "\n";
    } catch (const krf::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return krf::kExitConfig;
    }
    return krf::kExitPass;
  }
  return krf::kExitConfig;
}

#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "json.hpp"
#include "krf/flow.hpp"

namespace krf {

inline constexpr int kConfigFormatVersion = 1;

// Monitors double as invariant suites: a disabled monitor leaves its CSV
// columns as nan and its checks out of the exit status.
inline const std::set<std::string> kKnownMonitors = {"normalization", "identities", "monotonicity", "estimates",
                                                     "spectrum"};

struct RunConfig {
  int format_version = kConfigFormatVersion;
  int n = 1;
  int N = 64;
  struct Initial {
    std::string kind = "zero";  // zero | perturbation | file
    double amplitude = 0.0;
    std::string profile = "P2";
    std::string path;
  } initial;
  Scheme scheme = Scheme::semi_implicit;
  double dt = 0.0;
  double t_max = 0.0;
  struct Tolerances {
    double normalization = 1e-10;
    double convergence = 1e-8;
    double invariant = 1e-8;
  } tolerances;
  std::set<std::string> monitors = kKnownMonitors;
  std::string output_directory = "krf_run";
  int snapshot_stride = 1;
  std::uint64_t seed = 1;
  bool stop_on_convergence = true;

  bool monitor(const std::string& name) const { return monitors.count(name) > 0; }
  FlowOptions flow_options() const;
};

// Strict JSON parsing: unknown keys, wrong types and out-of-range values
// raise ConfigError carrying the key path and the source line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Fully expanded config, defaults included.
nlohmann::json to_json(const RunConfig& c);

const char* scheme_name(Scheme s);

}  // namespace krf

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "krf/config.hpp"

namespace krf {

inline constexpr int kExitPass = 0;
inline constexpr int kExitInvariant = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitConfig = 4;

// Fixed thresholds of the estimate suite; the yau and theta bounds are
// theorems, so anything beyond roundoff is an implementation error.
inline constexpr double kYauTolerance = 1e-6;
inline constexpr double kThetaTolerance = 1e-8;
inline constexpr double kDensityAgreement = 1e-10;
inline constexpr double kLambda1Tolerance = 1e-6;

struct SuiteFailure {
  std::string suite;
  std::string invariant;
  double t = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
};

struct RunOutcome {
  int exit_code = kExitPass;
  std::filesystem::path directory;
  std::string termination;
  std::string message;
  std::vector<SuiteFailure> failures;
  nlohmann::json manifest;
};

// output.directory, under $KRF_OUTPUT_ROOT when that is set and the
// directory is relative.
std::filesystem::path resolve_output_directory(const RunConfig& c);

Vec initial_potential(const RunConfig& c, const GeometryPtr& geom);

// Runs the flow with all enabled monitors, writing manifest.json,
// timeseries.csv and snapshots/snap_NNNNNN.json. The manifest is rewritten
// after every durable snapshot, so an aborted run still names the last one.
RunOutcome execute(const RunConfig& c);

// Reloads a snapshot, recomputes the flow quantities and compares them with
// the stored ones.
nlohmann::json inspect(const std::filesystem::path& snapshot);

}  // namespace krf

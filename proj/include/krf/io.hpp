#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "krf/flow.hpp"

namespace krf {

inline constexpr int kCsvVersion = 1;
inline constexpr int kSnapshotFormatVersion = 1;

inline constexpr std::array<const char*, 19> kCsvColumns = {
    "t",          "c",        "a",       "W",           "I",           "J",        "nu",
    "lambda1",    "futaki",   "sup_u",   "sup_grad_u",  "sup_lap_u",   "sup_scal", "diam",
    "density_min", "c2_residual", "c3_norm", "ke_residual", "soliton_residual"};

using CsvRow = std::array<double, kCsvColumns.size()>;

std::string csv_header();
// Values as %.17g; non-finite values print as nan/inf.
std::string csv_row(const CsvRow& row);

// Writes to a sibling temporary file, flushes, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);
void append_line(const std::filesystem::path& path, const std::string& line);

nlohmann::json snapshot_json(const FlowState& s, const nlohmann::json& residuals);

struct SnapshotData {
  int n = 0, N = 0;
  double t = 0.0, c = 0.0, a = 0.0;
  Vec x, phi, u;
  nlohmann::json residuals;
};
// Throws Error on a missing file, malformed JSON or inconsistent sizes.
SnapshotData read_snapshot(const std::filesystem::path& path);

// Resample nodal values given on a Chebyshev–Lobatto grid of any size onto `geom`.
Vec resample(const Vec& values, const GeometryPtr& geom);

}  // namespace krf

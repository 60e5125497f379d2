#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace krf {

struct VerifyEntry {
  std::string suite;
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string relation;  // "<=" or ">="
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<VerifyEntry> entries;

  bool passed() const;
  // One line per invariant, fixed formatting; identical for identical seeds.
  std::string text() const;
  nlohmann::json to_json() const;
};

inline const std::vector<std::string> kVerifySuites = {"tensor", "functional", "flow", "estimates"};

// suite is one of kVerifySuites or "all"; throws std::invalid_argument otherwise.
// Invariant failures are report entries, never exceptions.
VerifyReport verify(const std::string& suite, std::uint64_t seed);

}  // namespace krf

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace krf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Metric coefficient matrix not positive definite or too ill-conditioned.
class SingularMetricError : public Error {
 public:
  using Error::Error;
};

class NonKahlerError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Potential left the admissible cone; index is the offending grid node.
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(const std::string& what, int index, double x)
      : Error(what), index(index), x(x) {}
  int index;
  double x;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<double> history = {})
      : Error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key, int line = -1)
      : Error(what), key(std::move(key)), line(line) {}
  std::string key;
  int line;
};

}  // namespace krf

#pragma once

#include <stdexcept>
#include <string>

namespace conlap {

/// Invalid or unsatisfiable configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Scale regime rejected: net too coarse or radius outside the admissible
/// window for a meaningful run (CLI exit code 3).
struct RegimeError : std::runtime_error {
  explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Eigensolver failed to converge within its iteration budget (CLI exit
/// code 4).
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A verified inequality from the check suite failed (CLI exit code 5).
struct CheckViolation : std::runtime_error {
  explicit CheckViolation(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace conlap

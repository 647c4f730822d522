#pragma once

#include <stdexcept>
#include <string>

namespace c0ip {

/// Invalid user-supplied parameters (bad n, r < m, unknown example, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mesh topology or geometry violates a structural requirement.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact-solution evaluation that cannot be carried out (singular point,
/// insufficient jet order, parse failure).
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear solve failed (singular / indefinite matrix, CG stagnation).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace c0ip

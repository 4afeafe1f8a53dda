#pragma once

#include <stdexcept>
#include <string>

namespace orbitlab {

/// Caller violated a precondition (mismatched groups, bad arguments).
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A result drifted off its constraint set beyond repair (near-singular
/// matrix, projection failure).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A point left the manifold domain of an action.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg, double exit_time = 0.0)
      : std::runtime_error(msg), exit_time(exit_time) {}
  double exit_time;
};

/// Input outside the injectivity domain of a chart, or a chart solve
/// failed to converge.
struct ChartDomainError : std::runtime_error {
  explicit ChartDomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A geometric construction (cross-section, flat chart) cannot proceed,
/// e.g. because of rank deficiency at the anchor point.
struct ConstructionError : std::runtime_error {
  explicit ConstructionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad run configuration (unknown action id, invalid values).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Failure writing an output file.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace orbitlab

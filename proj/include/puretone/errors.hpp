#pragma once

#include <stdexcept>
#include <string>

namespace puretone {

// Invalid argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Adaptive integration could not meet its tolerance above the minimum step.
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Root finder or Newton iteration failed.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Nonlinear evolution left the classical regime (gradient growth or p <= 0).
struct ShockProximityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// NaN or other floating point breakdown.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The requested mode is resonant (a divisor vanishes).
struct ResonanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File or schema problem.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace puretone

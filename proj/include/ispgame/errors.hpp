#pragma once

#include <stdexcept>
#include <string>

namespace ispgame {

// Invalid model parameters, malformed scenario files, bad CLI arguments.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Smooth-demand calibration has no finite alpha >= 1 for the given inputs.
class CalibrationInfeasible : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A numerical solve did not converge, or a re-solve needed by a derived
// quantity produced no interior equilibrium.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ispgame

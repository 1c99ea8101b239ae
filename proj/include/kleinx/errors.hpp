#pragma once

#include <stdexcept>
#include <string>

namespace kleinx {

/// Failure of an otherwise well-posed numerical computation: integration
/// breakdown, a required event or root not found, loss of convergence,
/// or an internal consistency check outside its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation requested too close to a pole of an elliptic function.
class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// File or stream failure while persisting an artifact.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kleinx

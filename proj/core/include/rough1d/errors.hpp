#pragma once

#include <stdexcept>
#include <string>

namespace rough1d {

/// Raised when a caller violates a precondition (bad grid, bad order, unknown name).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot deliver its contract: non-positive
/// definite covariance, flow blow-up, non-contraction at minimal step, failed audit.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rough1d

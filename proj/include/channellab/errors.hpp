#pragma once

#include <stdexcept>
#include <string>

namespace channellab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not match the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An input violates a documented precondition (non-Hermitian, not a state, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to converge, or produced a residual above tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Two routes that must agree by theorem did not. Indicates numerical trouble.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace channellab

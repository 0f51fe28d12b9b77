#pragma once

#include <stdexcept>
#include <string>

namespace carleson {

/// Base of every error raised by the library. `exit_code()` follows the CLI
/// contract: 2 for bad input, 4 for numerical failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 4; }
};

/// Invalid data: points outside the ball, dimension mismatch, bad weights.
class InputError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// The requested operation is not defined for the given space.
class UnsupportedError : public InputError {
 public:
  using InputError::InputError;
};

/// Non-convergence, NaN at a quadrature node, degenerate matrices.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A kernel denominator fell below the rounding threshold.
class SingularityError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace carleson

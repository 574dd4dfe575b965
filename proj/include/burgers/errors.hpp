#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace burgers {

/// Short scientific rendering of a number for messages.
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments (bad flag values, out-of-range parameters).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition does not hold (non-mean-zero input, k <= pi, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The grid cannot represent the field to the required accuracy.
class ResolutionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A computation produced NaN/Inf or an iterative method failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Root or extremum search could not bracket its target.
class BracketError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Process exit status for a failure: 2 validation, 3 precondition or resolution, 4 numeric.
inline int exit_code(const Error& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return 2;
  if (dynamic_cast<const PreconditionError*>(&e)) return 3;
  return 4;
}

}  // namespace burgers

#pragma once

#include <stdexcept>
#include <string>

namespace hnls {

// Base of every error raised by the library. Subclasses mark the failure
// category so callers (and the CLI exit-code mapping) can tell a bad input
// from a numerical breakdown.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller-side problems: invalid arguments, inconsistent sizes, grids.
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};
class InvalidFieldError : public InvalidParameterError {
 public:
  using InvalidParameterError::InvalidParameterError;
};
class SizeMismatchError : public InvalidParameterError {
 public:
  using InvalidParameterError::InvalidParameterError;
};
class GridMismatchError : public InvalidParameterError {
 public:
  using InvalidParameterError::InvalidParameterError;
};
class ResolutionError : public InvalidParameterError {
 public:
  using InvalidParameterError::InvalidParameterError;
};
class AliasingError : public InvalidParameterError {
 public:
  using InvalidParameterError::InvalidParameterError;
};
class SingularSymbolError : public InvalidParameterError {
 public:
  using InvalidParameterError::InvalidParameterError;
};

// Numerical breakdowns.
class NumericalError : public Error {
 public:
  using Error::Error;
};
class NonconvergentError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class SingularDeterminantError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace hnls

#pragma once

#include <stdexcept>
#include <string>

namespace bmshift {

// Root of every error raised by the library. Errors fall into two
// families: validation (bad input, exit code 2 in the CLI) and numeric
// (an honest computation that could not be completed, exit code 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// An interval could not be narrowed enough to decide a floor or a sign;
// the value may be exactly an integer and needs an exact representation.
class PrecisionExhausted : public NumericError {
 public:
  using NumericError::NumericError;
};

class NotInDomain : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonPositiveImage : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class HorizonTooSmall : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoClosedForm : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotRational : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidDensity : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonConvergence : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateWeights : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonPathComponent : public NumericError {
 public:
  using NumericError::NumericError;
};

class CapExceeded : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace bmshift

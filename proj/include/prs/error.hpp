#pragma once

#include <stdexcept>
#include <string>

namespace prs {

/// Base of every error raised by the library. The CLI maps each subclass to
/// its own exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (counts, probability vectors, files).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Iterative numerical method did not meet its tolerance within budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Decision-framework parameters that cannot produce valid boundaries.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// tau1 >= tau2: the partially-discrepant region vanished.
class BoundaryOverlapError : public ConfigurationError {
 public:
  using ConfigurationError::ConfigurationError;
};

/// M * delta exceeds the smallest reference probability.
class ConstraintViolation : public ConfigurationError {
 public:
  using ConfigurationError::ConfigurationError;
};

}  // namespace prs

#pragma once

#include <stdexcept>
#include <string>

namespace srpulse {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model parameters, schedules, or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operands whose dimensions do not agree (operator vs. state).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Adaptive integration could not proceed (step-size underflow, step budget).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// A monitored numerical invariant was violated (trace drift, norm floor,
/// undefined mean-spin direction, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace srpulse

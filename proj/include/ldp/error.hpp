#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ldp {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (e.g. t <= 0 for the heat kernel).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a documented invariant (non-monotone CDF, bad dimensions, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or a failed linear solve.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The SBM field left the truncated noise window; carries the offending step.
class WindowExceededError : public NumericalError {
 public:
  WindowExceededError(std::size_t step, double value, double a_min, double a_max)
      : NumericalError("field value " + std::to_string(value) + " left noise window [" +
                       std::to_string(a_min) + ", " + std::to_string(a_max) + "] at step " +
                       std::to_string(step)),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A configured resource cap (particle count) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace ldp

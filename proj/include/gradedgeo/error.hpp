#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gradedgeo {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position()` is the 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation hit a singular point of an elementary function, left the chart
/// box, or asked for more derivatives than the engine is configured for.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// |det g| fell below the degeneracy threshold.
class DegenerateMetricError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Bad construction arguments (shape mismatch, invalid chart, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace gradedgeo

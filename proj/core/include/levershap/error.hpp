#pragma once

#include <stdexcept>
#include <string>

namespace levershap {

// Base for all library errors so callers can catch the whole family.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dimension or architecture disagreement between values that must be congruent.
struct ShapeError : Error {
  using Error::Error;
};

// A precondition on an argument was violated.
struct InvalidArgumentError : Error {
  using Error::Error;
};

// Non-finite gradients or targets; the update was refused.
struct PoisonedUpdateError : Error {
  using Error::Error;
};

// Checkpoint or log record could not be decoded.
struct LoadError : Error {
  using Error::Error;
};

struct EmptyBufferError : Error {
  using Error::Error;
};

// Non-finite state handed to the policy.
struct InvalidStateError : Error {
  using Error::Error;
};

struct DegeneratePoseError : Error {
  using Error::Error;
};

// Requested computation would exceed a hard cost guard.
struct BudgetExceededError : Error {
  using Error::Error;
};

struct UnsupportedModelError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Config file could not be parsed or failed validation.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace levershap

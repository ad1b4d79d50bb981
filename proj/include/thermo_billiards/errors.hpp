#pragma once

#include <stdexcept>
#include <string>

namespace tb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state, index or argument violates an invariant of the model.
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// A free flight exceeded the table's sigma_cap (horizon violation or bad cap).
class NoCollisionWithinCap : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a closed-form function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation only defined for a narrower regime (e.g. equilibrium tables).
class UnsupportedRegime : public Error {
 public:
  using Error::Error;
};

}  // namespace tb

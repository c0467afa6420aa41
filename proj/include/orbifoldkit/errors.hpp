#pragma once
#include <stdexcept>

namespace orbifoldkit {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or precondition-violating input supplied by the caller.
struct InputError : Error {
  using Error::Error;
};

// A congruence system with no solution at all.
struct EmptySolution : Error {
  using Error::Error;
};

// An identity that must hold by construction failed; indicates a bug, never
// bad input.  Raised instead of silently producing wrong mathematics.
struct InternalCheckFailure : Error {
  using Error::Error;
};

// Evaluation or local degree disagreed across points of one fiber.
struct InconsistentFiber : InternalCheckFailure {
  using InternalCheckFailure::InternalCheckFailure;
};

// The two independent injectivity decision paths returned different verdicts.
struct PathDisagreement : InternalCheckFailure {
  using InternalCheckFailure::InternalCheckFailure;
};

// quotient_step called on a pair whose translation kernel H is trivial.
struct TrivialH : InputError {
  using InputError::InputError;
};

// ramification needs every postcritical vertex complete.
struct IncompletePortrait : InputError {
  using InputError::InputError;
};

// superlattice_basis input failed to produce a superlattice of Z^2.
struct NotALattice : InputError {
  using InputError::InputError;
};

}  // namespace orbifoldkit

#pragma once

#include <stdexcept>
#include <string>

namespace whitcrest {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bad arguments (preconditions violated by the caller).
class InvalidInput : public Error {
  public:
    using Error::Error;
};

// a >= b and similar range mistakes.
class InvalidRange : public InvalidInput {
  public:
    using InvalidInput::InvalidInput;
};

// Tail decay order p <= 1: the remainder model does not converge.
class InvalidDecay : public InvalidInput {
  public:
    using InvalidInput::InvalidInput;
};

// Evaluation requested at a point where the function diverges.
class DomainError : public Error {
  public:
    using Error::Error;
};

// Adaptive quadrature ran out of depth with the estimate above tolerance.
class NonConvergent : public Error {
  public:
    using Error::Error;
};

// Newton iteration cap hit, or the iterate left the admissible region.
class NoConvergence : public Error {
  public:
    using Error::Error;
};

class SingularJacobian : public Error {
  public:
    using Error::Error;
};

// Continuation step fell below step_min before reaching the stop gap.
class BranchStalled : public Error {
  public:
    using Error::Error;
};

// Profile is too far from the limiting wave for crest rescaling.
class NotHighest : public Error {
  public:
    using Error::Error;
};

class WindowTooSmall : public Error {
  public:
    using Error::Error;
};

} // namespace whitcrest

#pragma once

#include <stdexcept>
#include <string>

namespace tmv {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A machine document violates the schema or a machine invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A bound computation (crossing-length constant, witness scan) would exceed
// its effort limit.
class InfeasibleBound : public Error {
 public:
  using Error::Error;
};

// The requested question is not algorithmically decidable for this input
// (e.g. multi-tape time bounds with T(n) >= n + 1 everywhere).
class OutsideDecidableRange : public Error {
 public:
  using Error::Error;
};

// A caller violated an operation precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Raised internally when a work budget runs out; callers turn this into an
// Inconclusive verdict.
class EffortExceeded : public Error {
 public:
  explicit EffortExceeded(std::string what_cap)
      : Error("effort limit exhausted: " + what_cap), cap(std::move(what_cap)) {}
  std::string cap;
};

}  // namespace tmv

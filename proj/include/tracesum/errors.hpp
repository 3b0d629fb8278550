#pragma once

#include <stdexcept>
#include <string>

namespace tracesum {

// Base class for every failure raised by the library. The CLI maps
// VerificationError subclasses to exit code 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or input-shape problems.
class InputError : public Error {
 public:
  using Error::Error;
};

// A checked identity or bound did not hold.
class VerificationError : public Error {
 public:
  using Error::Error;
};

#define TRACESUM_DEFINE_ERROR(Name, Base) \
  class Name : public Base {              \
   public:                                \
    using Base::Base;                     \
  }

TRACESUM_DEFINE_ERROR(NotInvertible, InputError);
TRACESUM_DEFINE_ERROR(NotCoprime, InputError);
TRACESUM_DEFINE_ERROR(InvalidSpec, InputError);
TRACESUM_DEFINE_ERROR(TrivialCharacter, InputError);
TRACESUM_DEFINE_ERROR(OutOfRange, InputError);
TRACESUM_DEFINE_ERROR(EmptyMeasure, InputError);
TRACESUM_DEFINE_ERROR(InvalidInstance, InputError);
TRACESUM_DEFINE_ERROR(DegenerateNorm, InputError);
TRACESUM_DEFINE_ERROR(Overflow, InputError);
TRACESUM_DEFINE_ERROR(TruncationTooCoarse, InputError);
TRACESUM_DEFINE_ERROR(QuadratureFailure, InputError);

TRACESUM_DEFINE_ERROR(IdentityViolation, VerificationError);
TRACESUM_DEFINE_ERROR(LemmaViolation, VerificationError);

#undef TRACESUM_DEFINE_ERROR

}  // namespace tracesum

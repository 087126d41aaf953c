#pragma once

#include <stdexcept>
#include <string>

namespace markov_id {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: a matrix, map, file or config that fails
// a structural invariant. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A well-formed input that violates a statistical precondition of a test
// (e.g. the reference is outside the restricted class). Exit code 3.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Numerical routine failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

#define MARKOV_ID_DECLARE_ERROR(Name, Base) \
  class Name : public Base {                \
   public:                                  \
    using Base::Base;                       \
  };

MARKOV_ID_DECLARE_ERROR(RowSumError, ValidationError)
MARKOV_ID_DECLARE_ERROR(ZeroOnEdge, ValidationError)
MARKOV_ID_DECLARE_ERROR(OffEdgeMass, ValidationError)
MARKOV_ID_DECLARE_ERROR(InvalidEdgeSet, ValidationError)
MARKOV_ID_DECLARE_ERROR(RationalizationFailed, ValidationError)
MARKOV_ID_DECLARE_ERROR(InvalidLumping, ValidationError)
MARKOV_ID_DECLARE_ERROR(InvalidEmbedding, ValidationError)
MARKOV_ID_DECLARE_ERROR(EdgeMismatch, ValidationError)
MARKOV_ID_DECLARE_ERROR(NotLumpable, ValidationError)
MARKOV_ID_DECLARE_ERROR(TooLarge, ValidationError)
MARKOV_ID_DECLARE_ERROR(IncompatibleStateCount, ValidationError)
MARKOV_ID_DECLARE_ERROR(FormatError, ValidationError)
MARKOV_ID_DECLARE_ERROR(InvalidConfig, ValidationError)

MARKOV_ID_DECLARE_ERROR(NotIrreducible, PreconditionError)
MARKOV_ID_DECLARE_ERROR(PreconditionFailed, PreconditionError)
MARKOV_ID_DECLARE_ERROR(NotInVtest, PreconditionError)
MARKOV_ID_DECLARE_ERROR(ExclusionRegion, PreconditionError)

#undef MARKOV_ID_DECLARE_ERROR

// Power iteration hit its iteration cap. Carries the last two estimates.
class NoConvergence : public NumericalError {
 public:
  NoConvergence(const std::string& what, double previous, double last)
      : NumericalError(what), previous_(previous), last_(last) {}
  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

}  // namespace markov_id

#ifndef QGKM_ERRORS_HPP
#define QGKM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qgkm {

// Base class for every failure the library can signal.  Subtypes carry the
// condition name used in CLI reports; what() holds a human-readable message.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual const char* kind() const { return "Error"; }
};

#define QGKM_DEFINE_ERROR(NAME)                                       \
  struct NAME : Error {                                               \
    explicit NAME(const std::string& msg) : Error(msg) {}             \
    const char* kind() const override { return #NAME; }               \
  }

QGKM_DEFINE_ERROR(DivisionByZero);   // inverse/division by the zero scalar
QGKM_DEFINE_ERROR(PoleAtZero);       // eval at q=0 of a scalar with a pole there
QGKM_DEFINE_ERROR(ParseError);       // malformed scalar expression or JSON field
QGKM_DEFINE_ERROR(InvalidDatum);     // matrix fails the defining conditions
QGKM_DEFINE_ERROR(NotDominant);      // highest weight not dominant integral
QGKM_DEFINE_ERROR(TruncationEscape); // operation needs weights beyond depth
QGKM_DEFINE_ERROR(LatticeViolation); // expansion over lattice has a pole at q=0
QGKM_DEFINE_ERROR(ZeroVector);       // crystal operator applied to the zero class
QGKM_DEFINE_ERROR(NoConvergence);    // bar-symmetrization failed to terminate
QGKM_DEFINE_ERROR(NotABasis);        // candidate family is not a graded basis
QGKM_DEFINE_ERROR(HypothesisFailed); // uniqueness matcher: top projections differ
QGKM_DEFINE_ERROR(NotMonomial);      // uniqueness matcher: transition not monomial
QGKM_DEFINE_ERROR(BadSequence);      // cyclic sequence does not cover the index set
QGKM_DEFINE_ERROR(UsageError);       // CLI misuse (maps to exit code 2)

#undef QGKM_DEFINE_ERROR

}  // namespace qgkm

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace hyperkl {

/// Base class for all library failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input that prevents building an object at all: dimension
/// mismatches, non-permutation involutions, broken group tables. Distinct
/// from an axiom violation on a well-formed structure.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A well-formed structure that violates a hypergroup axiom, or a derived
/// identity (Haar invariance) that must hold on valid input.
class AxiomError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its stated domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A configurable resource budget (support size, atom cap) was exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Iteration limit reached before the convergence tolerance was met.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_gap, long iterations)
      : Error(what), last_gap(last_gap), iterations(iterations) {}

  double last_gap;
  long iterations;
};

/// File or JSON parsing problem.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperkl

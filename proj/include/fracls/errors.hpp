#pragma once

#include <stdexcept>
#include <string>

namespace fracls {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series or iteration hit its cap without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A value violates a type invariant (e.g. mixing polynomials with different lambda).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// An operation was called with an inconsistent combination of inputs.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A function returned a non-finite value at a quadrature node.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Base for failures of the numerical linear algebra.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A recurrence produced a (near-)zero squared norm.
class DegeneracyError : public NumericalError {
 public:
  DegeneracyError(const std::string& what, int index)
      : NumericalError(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// Not enough distinct data to determine the requested degree.
class RankDeficiencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A linear system is singular, indefinite or too ill-conditioned to trust.
class ConditioningError : public NumericalError {
 public:
  ConditioningError(const std::string& what, double cond)
      : NumericalError(what), cond_(cond) {}
  double cond() const noexcept { return cond_; }

 private:
  double cond_;
};

}  // namespace fracls

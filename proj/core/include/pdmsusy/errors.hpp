#pragma once

#include <stdexcept>
#include <string>

namespace pdmsusy {

// Precondition violations are reported with std::invalid_argument and
// evaluations outside a profile's domain with std::domain_error. Everything
// below is a failure of the numerics themselves.

/// Base class for failures that are not caused by malformed input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function that must carry information is identically zero.
class DegenerateFunctionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Iterated construction overflowed; `step` names the failing iteration.
class InstabilityError : public NumericalError {
 public:
  InstabilityError(const std::string& what, int step)
      : NumericalError(what), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

/// The tridiagonal eigensolver did not converge.
class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, int iterations)
      : NumericalError(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

/// A SUSY seed is not a formal eigenfunction at the stated energy.
class InvalidSeedError : public NumericalError {
 public:
  InvalidSeedError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Operation called for the wrong transformation family
/// (e.g. equal factorization energies on the non-confluent route).
class WrongModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The two seeds of a second-order transformation are linearly dependent.
class DegenerateWronskianError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// No interval free of denominator zeros was found.
class NoRegularSubdomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pdmsusy

#pragma once

#include <stdexcept>
#include <string>

namespace pathpol {

// Base of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input files (JSON / CSV).
struct ParseError : Error {
  using Error::Error;
};

// Domain-invariant violations on inputs.
struct ValidationError : Error {
  using Error::Error;
};

struct NonHermitianInput : ValidationError {
  double residual;  // ||m - m^dagger||_F relative to ||m||_F
  explicit NonHermitianInput(double r)
      : ValidationError("input is not Hermitian (relative residual " +
                        std::to_string(r) + ")"),
        residual(r) {}
};
using NonHermitian = NonHermitianInput;

struct NotPositive : ValidationError {
  double min_eigenvalue;
  explicit NotPositive(double v)
      : ValidationError("matrix is not positive semidefinite (min eigenvalue " +
                        std::to_string(v) + ")"),
        min_eigenvalue(v) {}
};

struct NotPSD : ValidationError {
  double min_eigenvalue;
  explicit NotPSD(double v)
      : ValidationError("matrix square root requires PSD input (min eigenvalue " +
                        std::to_string(v) + ")"),
        min_eigenvalue(v) {}
};

struct BadTrace : ValidationError {
  double trace;
  explicit BadTrace(double t)
      : ValidationError("trace " + std::to_string(t) + " is not 1"), trace(t) {}
};

struct BadParameter : ValidationError {
  using ValidationError::ValidationError;
};

struct DimensionMismatch : ValidationError {
  using ValidationError::ValidationError;
};

struct NonRealExpectation : ValidationError {
  double imag_residue;
  explicit NonRealExpectation(double v)
      : ValidationError("expectation has imaginary residue " + std::to_string(v)),
        imag_residue(v) {}
};

struct MissingPhase : ValidationError {
  using ValidationError::ValidationError;
};

struct ZeroDenominator : ValidationError {
  using ValidationError::ValidationError;
};

struct RankDeficient : ValidationError {
  using ValidationError::ValidationError;
};

struct DependentConstraints : ValidationError {
  double condition;
  explicit DependentConstraints(double c)
      : ValidationError("constraint Gram matrix condition " + std::to_string(c) +
                        " exceeds the independence bound"),
        condition(c) {}
};

// Iteration caps.
struct ConvergenceError : Error {
  using Error::Error;
};

struct NoConvergence : ConvergenceError {
  using ConvergenceError::ConvergenceError;
};

struct NotConverged : ConvergenceError {
  using ConvergenceError::ConvergenceError;
};

// Constraint targets on or outside the boundary of the feasible set.
struct Infeasible : Error {
  using Error::Error;
};

}  // namespace pathpol

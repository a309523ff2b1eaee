#pragma once

#include <stdexcept>
#include <string>

namespace nsqht {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (non-Hermitian input, alpha > 1 - s, probability outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A requested dense object or enumeration would exceed the sizing limits.
class SizingError : public Error {
 public:
  using Error::Error;
};

/// log or a negative power was requested on an operator with (numerically)
/// vanishing eigenvalues, or two supports do not match where they must.
class SingularSupportError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// V(P||Q) = 0 where an expansion needs a strictly positive variance.
class DegenerateVarianceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  /// Off-diagonal Frobenius norm left when the iteration cap was hit.
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Malformed input file or configuration.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace nsqht

#pragma once

#include <stdexcept>
#include <string>

namespace fockskin {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad parameters (dimension, site index, flag value, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A matrix violates the block structure it is supposed to have.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver / integrator / fit did not produce a trustworthy number.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Evaluation point lies where a formula is singular.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Reference energy too close to a spectral locus to decide a winding number.
class AmbiguousResult : public Error {
 public:
  using Error::Error;
};

}  // namespace fockskin

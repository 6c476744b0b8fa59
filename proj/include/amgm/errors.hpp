#pragma once

#include <stdexcept>
#include <string>

namespace amgm {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector lengths that must agree do not.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An input lies outside the mathematical domain of the operation
/// (negative data, weights that do not sum to 1, exponents out of range).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of a bound method is violated; the message
/// names the precondition and, where one exists, the alternative method.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The requested quantity is undefined for this input (e.g. a
/// gap/variance ratio of a constant vector).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A computed result violated one of the library's own invariants.
/// Seeing this means the certificate cannot be trusted; it is never
/// raised for bad user input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace amgm

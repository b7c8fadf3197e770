#pragma once

#include <stdexcept>
#include <string>

namespace carnot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or mismatched arguments (dimension, model or algebra mismatch).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Request outside the supported range (e.g. free nilpotent step > 3).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Non-finite state or a quantity that is undefined for the given data.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference stencil would leave the sampled grid.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// An invariant the library guarantees was violated. Indicates a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Config or data file could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace carnot

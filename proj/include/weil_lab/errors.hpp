#pragma once

#include <stdexcept>
#include <string>

namespace weil {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (grid mismatch, bad range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a pole or at a point where a quotient is undefined.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Parsing / file errors.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace weil

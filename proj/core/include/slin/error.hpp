#pragma once

#include <stdexcept>
#include <string>

namespace slin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different variable spaces.
class SpaceMismatchError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition (bad index, wrong length, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A guarantee the algorithms rely on was violated. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace slin

#pragma once

#include <stdexcept>
#include <string>

namespace asln {

/// Base for every error raised by the library. The CLI maps all of these to
/// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The requested horizon exceeds what the implementation supports.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A normalising quantity vanished (B_n = 0, F(n) = 0, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incompatible file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace asln

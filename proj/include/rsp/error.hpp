#pragma once

#include <stdexcept>
#include <string>

namespace rsp {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition: bad dimension, out-of-range parameter, unknown label.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An enumeration or matrix would exceed the configured size budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A unitary set does not randomize well enough for the requested POVM.
class NotRandomizing : public Error {
 public:
  using Error::Error;
};

// A randomized construction kept failing its acceptance check.
class RetriesExhausted : public Error {
 public:
  using Error::Error;
};

namespace detail {
[[noreturn]] inline void fail(const std::string& what) { throw InvalidArgument(what); }
inline void require(bool ok, const std::string& what) {
  if (!ok) fail(what);
}
}  // namespace detail

}  // namespace rsp

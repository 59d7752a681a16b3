#pragma once

#include <stdexcept>
#include <string>

namespace fgft {

// Base of every exception thrown by the library. The CLI maps the concrete
// subclasses to its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or violated preconditions (usage errors).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Non-convergence or other numerical breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// File-system or parse failures.
class IoError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace fgft

#pragma once

#include <stdexcept>
#include <string>

namespace filippov {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed configuration, unknown preset.
class ParamError : public Error {
 public:
  using Error::Error;
};

/// Input outside the domain of an operation (negative density, point off the sliding segment, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Step-size underflow, NaN, degenerate denominators, failed brackets.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace filippov

#pragma once

#include <stdexcept>
#include <string>

namespace flarevt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input: flare-class labels, CSV rows, timestamps.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input data that cannot support the requested analysis
/// (empty catalogs, zero exceedances, degenerate samples).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Operation illegal in the object's current state.
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace flarevt

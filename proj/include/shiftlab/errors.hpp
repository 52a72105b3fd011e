#pragma once

#include <stdexcept>
#include <string>

namespace shiftlab {

// Base class for all library errors. Subclasses map onto CLI exit codes:
// DomainError/ConfigError -> 2 (usage), CapacityError/TruncationError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value or index lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A request is structurally malformed (bad file, bad flag combination, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An exact computation would exceed the representable range.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A truncated (finite-window) computation would lose mass outside the window.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace shiftlab

#pragma once

#include <stdexcept>
#include <string>

namespace kwe {

/// Base class for all toolkit errors. Subclasses map to CLI exit codes:
/// UsageError -> 1, DataError -> 2, NumericError -> 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad flags, bad config keys, out-of-range parameters.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed inputs, contract violations in data, missing vocabulary entries.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, degenerate vectors, exhausted samplers.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace kwe

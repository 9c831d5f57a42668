#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wrec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input record. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

/// A dense intermediate would exceed the configured dimension cap.
class CapacityError : public Error {
 public:
  CapacityError(std::size_t requested, std::size_t cap)
      : Error("dense dimension " + std::to_string(requested) +
              " exceeds cap " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}
  std::size_t requested() const { return requested_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class NotSpdError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Raised when a metric is undefined for the given input (empty target set).
class MetricError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Model / split vocabularies or file versions do not match.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace wrec

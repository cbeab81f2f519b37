#pragma once

#include <stdexcept>
#include <string>

namespace uclust {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs of incompatible shape (vector lengths, matrix sizes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Values outside the mathematical domain of an operation (non-finite data,
/// sizes for which a formula is undefined).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A U-statistic was requested for groups too small to define it.
class UndefinedStatisticError : public Error {
 public:
  using Error::Error;
};

/// A local move would leave one of the two groups empty.
class InvalidMoveError : public Error {
 public:
  using Error::Error;
};

class InsufficientSampleError : public Error {
 public:
  using Error::Error;
};

/// Missing or inconsistent configuration (e.g. no variance for a size).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class TooSmallError : public Error {
 public:
  using Error::Error;
};

/// Malformed input files. Input validation errors map to CLI exit code 1.
class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace uclust

#pragma once

#include <stdexcept>
#include <string>

namespace pnu {

// Configuration errors map to CLI exit code 2, data errors to exit code 3.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise malformed numeric input.
class InputError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t row, const std::string& what)
      : DataError("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class CapacityError : public DataError {
 public:
  using DataError::DataError;
};

/// A risk term references an empty sample set.
class EvaluationError : public DataError {
 public:
  using DataError::DataError;
};

class DimensionError : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateError : public DataError {
 public:
  using DataError::DataError;
};

class RankError : public Error {
 public:
  using Error::Error;
};

}  // namespace pnu

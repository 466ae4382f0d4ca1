#pragma once

#include <stdexcept>
#include <string>

namespace drivesent {

// Base of every error the library throws. `exit_code` is what the CLI
// returns when the error escapes a command.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, int exit_code)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(what, 2) {}
};

// A required column is missing from the input header.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(what, 2) {}
};

// Nothing left to work on (empty file, empty corpus after filtering, ...).
class EmptyInputError : public Error {
 public:
  explicit EmptyInputError(const std::string& what) : Error(what, 2) {}
};

class RowError : public Error {
 public:
  RowError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what, 3), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what, 3) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what, 4) {}
};

class IndexError : public Error {
 public:
  explicit IndexError(const std::string& what) : Error(what, 4) {}
};

}  // namespace drivesent

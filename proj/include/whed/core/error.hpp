#pragma once

#include <stdexcept>
#include <string>

namespace whed {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input data (files, wire records, configs).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failures: unreadable or unwritable paths.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to reach its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A CSV cell that violates its file's declared schema.
class SchemaError : public DataError {
 public:
  SchemaError(std::string file, std::size_t line, std::size_t column, const std::string& what);

  const std::string& file() const noexcept { return file_; }
  /// 1-based line number; 0 when the problem is not tied to a line.
  std::size_t line() const noexcept { return line_; }
  /// 1-based column number; 0 when the whole row is at fault.
  std::size_t column() const noexcept { return column_; }

 private:
  std::string file_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace whed

#include "whed/core/error.hpp"

namespace whed {

namespace {

std::string describe(const std::string& file, std::size_t line, std::size_t column,
                     const std::string& what) {
  std::string out = file;
  if (line != 0) out += ":" + std::to_string(line);
  if (column != 0) out += ": column " + std::to_string(column);
  return out + ": " + what;
}

}  // namespace

SchemaError::SchemaError(std::string file, std::size_t line, std::size_t column,
                         const std::string& what)
    : DataError(describe(file, line, column, what)),
      file_(std::move(file)),
      line_(line),
      column_(column) {}

}  // namespace whed

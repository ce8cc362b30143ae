#pragma once

#include <stdexcept>
#include <string>

namespace focinet {

/// Bad or inconsistent input data. The CLI maps this to exit code 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed row in a delimited file.
class ParseError : public DataError {
 public:
  ParseError(std::string file, std::size_t line, std::size_t column, const std::string& what);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string file_;
  std::size_t line_;
  std::size_t column_;
};

/// Invalid arguments or configuration. The CLI maps this to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace focinet

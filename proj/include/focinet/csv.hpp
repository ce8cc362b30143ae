#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace focinet {

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double value);

/// Header-first, comma-delimited reader. Columns are matched by name; any
/// order is accepted. Unknown columns are an error unless `lax`.
class CsvReader {
 public:
  CsvReader(const std::filesystem::path& path, std::vector<std::string_view> columns, bool lax = false);

  /// Advance to the next non-empty row; false at end of file.
  bool next();

  std::size_t line() const { return line_no_; }
  const std::string& file() const { return file_; }

  std::string_view text(std::size_t column) const;
  std::uint64_t u64(std::size_t column) const;
  std::int64_t i64(std::size_t column) const;
  int year(std::size_t column) const;
  double f64(std::size_t column) const;
  std::optional<std::uint64_t> opt_u64(std::size_t column) const;
  std::optional<std::int64_t> opt_i64(std::size_t column) const;

  /// Raises ParseError for the current row and the given logical column.
  [[noreturn]] void fail(std::size_t column, const std::string& what) const;

 private:
  std::ifstream in_;
  std::string file_;
  std::string line_;
  std::size_t line_no_ = 0;
  std::vector<std::size_t> physical_;  // logical column -> physical index
  std::size_t width_ = 0;
  std::vector<std::string_view> fields_;
};

/// Buffered writer with deterministic number formatting.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  ~CsvWriter() { flush(); }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  CsvWriter& header(std::initializer_list<std::string_view> names);
  CsvWriter& field(std::string_view text);
  CsvWriter& field(const char* text) { return field(std::string_view(text)); }
  CsvWriter& field(const std::string& text) { return field(std::string_view(text)); }
  CsvWriter& field(std::uint64_t value);
  CsvWriter& field(std::int64_t value);
  CsvWriter& field(int value) { return field(static_cast<std::int64_t>(value)); }
  CsvWriter& field(unsigned value) { return field(static_cast<std::uint64_t>(value)); }
  CsvWriter& field(double value);
  CsvWriter& empty();
  CsvWriter& end_row();
  void flush();

 private:
  void separator();
  std::ostream& out_;
  std::string buf_;
  bool row_open_ = false;
};

}  // namespace focinet

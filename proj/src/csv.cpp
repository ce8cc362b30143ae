#include "focinet/csv.hpp"

#include <charconv>
#include <cmath>

#include "focinet/errors.hpp"

namespace focinet {

std::string format_double(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

namespace {

void split(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

CsvReader::CsvReader(const std::filesystem::path& path, std::vector<std::string_view> columns, bool lax)
    : in_(path), file_(path.filename().string()) {
  if (!in_) throw DataError("missing file: " + path.string());
  if (!std::getline(in_, line_)) throw ParseError(file_, 1, 1, "missing header row");
  line_no_ = 1;
  if (!line_.empty() && line_.back() == '\r') line_.pop_back();
  std::vector<std::string_view> header;
  split(line_, header);
  width_ = header.size();
  physical_.assign(columns.size(), SIZE_MAX);
  for (std::size_t p = 0; p < header.size(); ++p) {
    bool known = false;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (header[p] == columns[c]) {
        if (physical_[c] != SIZE_MAX) throw ParseError(file_, 1, p + 1, "duplicate column '" + std::string(header[p]) + "'");
        physical_[c] = p;
        known = true;
      }
    }
    if (!known && !lax) throw ParseError(file_, 1, p + 1, "unknown column '" + std::string(header[p]) + "'");
  }
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (physical_[c] == SIZE_MAX) throw ParseError(file_, 1, 1, "missing column '" + std::string(columns[c]) + "'");
  }
}

bool CsvReader::next() {
  while (std::getline(in_, line_)) {
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    if (line_.empty()) continue;
    split(line_, fields_);
    if (fields_.size() != width_) {
      throw ParseError(file_, line_no_, std::min(fields_.size(), width_) + 1,
                       "expected " + std::to_string(width_) + " fields, found " + std::to_string(fields_.size()));
    }
    return true;
  }
  return false;
}

void CsvReader::fail(std::size_t column, const std::string& what) const {
  throw ParseError(file_, line_no_, physical_.at(column) + 1, what);
}

std::string_view CsvReader::text(std::size_t column) const { return fields_[physical_.at(column)]; }

namespace {

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

}  // namespace

std::uint64_t CsvReader::u64(std::size_t column) const {
  auto v = parse_number<std::uint64_t>(text(column));
  if (!v) fail(column, "expected unsigned integer, found '" + std::string(text(column)) + "'");
  return *v;
}

std::int64_t CsvReader::i64(std::size_t column) const {
  auto v = parse_number<std::int64_t>(text(column));
  if (!v) fail(column, "expected integer, found '" + std::string(text(column)) + "'");
  return *v;
}

int CsvReader::year(std::size_t column) const {
  auto v = parse_number<int>(text(column));
  if (!v) fail(column, "expected year, found '" + std::string(text(column)) + "'");
  return *v;
}

double CsvReader::f64(std::size_t column) const {
  auto v = parse_number<double>(text(column));
  if (!v || !std::isfinite(*v)) fail(column, "expected finite number, found '" + std::string(text(column)) + "'");
  return *v;
}

std::optional<std::uint64_t> CsvReader::opt_u64(std::size_t column) const {
  if (text(column).empty()) return std::nullopt;
  return u64(column);
}

std::optional<std::int64_t> CsvReader::opt_i64(std::size_t column) const {
  if (text(column).empty()) return std::nullopt;
  return i64(column);
}

CsvWriter& CsvWriter::header(std::initializer_list<std::string_view> names) {
  for (auto n : names) field(n);
  return end_row();
}

void CsvWriter::separator() {
  if (row_open_) buf_ += ',';
  row_open_ = true;
}

CsvWriter& CsvWriter::field(std::string_view text) {
  separator();
  buf_ += text;
  return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t value) {
  separator();
  char tmp[24];
  auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof tmp, value);
  buf_.append(tmp, ptr);
  return *this;
}

CsvWriter& CsvWriter::field(std::int64_t value) {
  separator();
  char tmp[24];
  auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof tmp, value);
  buf_.append(tmp, ptr);
  return *this;
}

CsvWriter& CsvWriter::field(double value) {
  separator();
  buf_ += format_double(value);
  return *this;
}

CsvWriter& CsvWriter::empty() {
  separator();
  return *this;
}

CsvWriter& CsvWriter::end_row() {
  buf_ += '\n';
  row_open_ = false;
  if (buf_.size() > (1u << 20)) flush();
  return *this;
}

void CsvWriter::flush() {
  if (!buf_.empty()) {
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
  }
  out_.flush();
}

}  // namespace focinet

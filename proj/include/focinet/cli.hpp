#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace focinet {

inline constexpr const char* kVersion = "0.1.0";

/// Parses "A..B" or a single year "A".
std::pair<int, int> parse_years(const std::string& text);

/// Output staging: files are written into a hidden sibling directory and moved
/// into the target directory on commit. Uncommitted staging is removed.
class Staging {
 public:
  explicit Staging(const std::filesystem::path& target);
  ~Staging();
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;

  const std::filesystem::path& dir() const { return staging_; }
  const std::filesystem::path& target() const { return target_; }
  /// Moves every staged file into the target; returns the file names.
  std::vector<std::string> commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path staging_;
  bool committed_ = false;
};

/// Entry point: 0 on success, 1 on a data error, 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace focinet

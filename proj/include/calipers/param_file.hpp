#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace calipers {

/// Parameter file: one `section::key = value` per line, `#` starts a comment,
/// values may be double-quoted.  Keys are case-sensitive and may appear once.
class ParameterFile {
 public:
  static ParameterFile parse(std::string_view text, std::string source = "<string>");
  /// Throws ConfigError if the file cannot be read.
  static ParameterFile load(const std::filesystem::path& path);

  /// Throws ConfigError naming the first key not in `known`.
  void require_known(const std::set<std::string, std::less<>>& known) const;

  std::optional<std::string> get(std::string_view key) const;
  bool contains(std::string_view key) const { return values_.find(key) != values_.end(); }

  std::optional<std::int64_t> get_int(std::string_view key) const;
  std::optional<bool> get_bool(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& values() const noexcept { return values_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::string, std::less<>> values_;
  std::map<std::string, int, std::less<>> lines_;
};

}  // namespace calipers

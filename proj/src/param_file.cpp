#include "calipers/param_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "calipers/error.hpp"

namespace calipers {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ParameterFile ParameterFile::parse(std::string_view text, std::string source) {
  ParameterFile pf;
  pf.source_ = std::move(source);
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quotes = !in_quotes;
      if (line[i] == '#' && !in_quotes) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'section::key = value'", pf.source_, line_no));
    }
    const std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    const auto sep = key.find("::");
    if (sep == std::string_view::npos || sep == 0 || sep + 2 >= key.size()) {
      throw ConfigError(fmt::format("{}:{}: key '{}' is not of the form section::key", pf.source_, line_no, key));
    }
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (pf.values_.contains(key)) {
      throw ConfigError(fmt::format("{}:{}: '{}' is set more than once", pf.source_, line_no, key));
    }
    pf.values_.emplace(std::string(key), std::string(value));
    pf.lines_.emplace(std::string(key), line_no);
  }
  return pf;
}

ParameterFile ParameterFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read parameter file '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path.string());
}

void ParameterFile::require_known(const std::set<std::string, std::less<>>& known) const {
  for (const auto& [key, value] : values_) {
    if (!known.contains(key)) {
      throw ConfigError(fmt::format("{}:{}: unknown parameter '{}'", source_, lines_.at(key), key));
    }
  }
}

std::optional<std::string> ParameterFile::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::int64_t> ParameterFile::get_int(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    throw ConfigError(fmt::format("{}: '{}' must be an integer, got '{}'", source_, key, *v));
  }
  return out;
}

std::optional<bool> ParameterFile::get_bool(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  if (*v == "yes" || *v == "true" || *v == "1") return true;
  if (*v == "no" || *v == "false" || *v == "0") return false;
  throw ConfigError(fmt::format("{}: '{}' must be yes/no, got '{}'", source_, key, *v));
}

}  // namespace calipers

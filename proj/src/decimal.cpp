#include "calipers/decimal.hpp"

#include <algorithm>
#include <cstdint>

namespace calipers {

std::optional<std::int64_t> parse_fixed_point(std::string_view text, int decimals) noexcept {
  if (text.empty() || decimals < 0 || decimals > 18) return std::nullopt;
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Int128 value = 0;
  int frac_digits = -1;  // -1 until the decimal point is seen
  bool any_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (frac_digits >= 0) return std::nullopt;
      frac_digits = 0;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    any_digit = true;
    if (frac_digits >= 0) {
      if (frac_digits == decimals) {
        if (c != '0') return std::nullopt;
        continue;
      }
      ++frac_digits;
    }
    value = value * 10 + (c - '0');
    if (value > INT64_MAX) return std::nullopt;
  }
  if (!any_digit) return std::nullopt;
  for (int i = std::max(frac_digits, 0); i < decimals; ++i) {
    value *= 10;
    if (value > INT64_MAX) return std::nullopt;
  }
  return static_cast<std::int64_t>(negative ? -value : value);
}

}  // namespace calipers

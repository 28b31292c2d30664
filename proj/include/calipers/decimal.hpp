#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace calipers {

// Wide intermediate for exact products of nanosecond counts.
__extension__ using Int128 = __int128;

/// Parses a plain decimal ("12", "0.05", "-3.25") into an integer scaled by
/// 10^decimals, exactly.  Returns nullopt for malformed input, overflow, or
/// more fractional digits than `decimals` (non-zero digits only).
std::optional<std::int64_t> parse_fixed_point(std::string_view text, int decimals) noexcept;

}  // namespace calipers

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace amt {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

inline constexpr std::uint8_t leaf_prefix = 0x00;
inline constexpr std::uint8_t internal_prefix = 0x01;

[[nodiscard]] Digest sha256(std::span<const std::uint8_t> data);

// SHA-256(0x00 || key || payload)
[[nodiscard]] Digest leaf_digest(std::string_view key, std::span<const std::uint8_t> payload);

// SHA-256(0x01 || child_0 || ... || child_k)
[[nodiscard]] Digest internal_digest(std::span<const Digest> children);

[[nodiscard]] std::string to_hex(std::span<const std::uint8_t> bytes);

/// Strict lowercase hex; throws Error(malformed) otherwise.
[[nodiscard]] Bytes from_hex(std::string_view hex);
[[nodiscard]] Digest digest_from_hex(std::string_view hex);

[[nodiscard]] inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

} // namespace amt

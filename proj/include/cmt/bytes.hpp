#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "cmt/error.hpp"

namespace cmt {

inline constexpr std::size_t kMaxWidth = 64;
inline constexpr std::size_t kDefaultWidth = 32;

/// Fixed-width octet string compared as a big-endian unsigned integer.
///
/// The width is chosen at runtime (1..kMaxWidth) but storage is inline, so
/// values are cheap to copy and live directly inside tree nodes. The Tag
/// parameter keeps keys, digests and priorities from being mixed up.
template <typename Tag>
class FixedBytes {
 public:
  FixedBytes() = default;

  /// All-zero value of the given width.
  static FixedBytes zero(std::size_t width) {
    check_width(width);
    FixedBytes out;
    out.width_ = static_cast<std::uint8_t>(width);
    return out;
  }

  static FixedBytes from_bytes(std::span<const std::uint8_t> bytes) {
    check_width(bytes.size());
    FixedBytes out;
    out.width_ = static_cast<std::uint8_t>(bytes.size());
    std::copy(bytes.begin(), bytes.end(), out.data_.begin());
    return out;
  }

  /// Big-endian encoding of `value`, left-padded with zeros to `width`.
  static FixedBytes from_uint(std::uint64_t value, std::size_t width = kDefaultWidth) {
    FixedBytes out = zero(width);
    for (std::size_t i = 0; i < width && value != 0; ++i) {
      out.data_[width - 1 - i] = static_cast<std::uint8_t>(value & 0xffu);
      value >>= 8;
    }
    return out;
  }

  /// Parses exactly 2*width lowercase or uppercase hex characters, no prefix.
  static FixedBytes from_hex(std::string_view hex, std::size_t width) {
    check_width(width);
    if (hex.size() != 2 * width) {
      throw InvalidInput("expected " + std::to_string(2 * width) + " hex chars, got " +
                         std::to_string(hex.size()));
    }
    FixedBytes out = zero(width);
    for (std::size_t i = 0; i < width; ++i) {
      out.data_[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    }
    return out;
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * width_);
    for (std::size_t i = 0; i < width_; ++i) {
      out.push_back(kDigits[data_[i] >> 4]);
      out.push_back(kDigits[data_[i] & 0xf]);
    }
    return out;
  }

  std::size_t width() const { return width_; }
  std::span<const std::uint8_t> bytes() const { return {data_.data(), width_}; }
  std::span<std::uint8_t> mutable_bytes() { return {data_.data(), width_}; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.begin() + width_, [](std::uint8_t b) { return b == 0; });
  }

  /// Bit `index` counted from the most significant bit of byte 0.
  bool bit(std::size_t index) const {
    return ((data_[index / 8] >> (7 - index % 8)) & 1u) != 0;
  }

  /// Values of different widths order by width first; within one tree all
  /// widths agree so this is plain big-endian comparison.
  friend std::strong_ordering operator<=>(const FixedBytes& a, const FixedBytes& b) {
    if (auto c = a.width_ <=> b.width_; c != 0) return c;
    for (std::size_t i = 0; i < a.width_; ++i) {
      if (auto c = a.data_[i] <=> b.data_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }
  friend bool operator==(const FixedBytes& a, const FixedBytes& b) { return (a <=> b) == 0; }

 private:
  static void check_width(std::size_t width) {
    if (width == 0 || width > kMaxWidth) {
      throw InvalidInput("byte width must be in [1, " + std::to_string(kMaxWidth) + "], got " +
                         std::to_string(width));
    }
  }

  static std::uint8_t nibble(char c) {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw InvalidInput(std::string("invalid hex character '") + c + "'");
  }

  std::array<std::uint8_t, kMaxWidth> data_{};
  std::uint8_t width_ = 0;
};

struct KeyTag {};
struct DigestTag {};
struct PriorityTag {};

using Key = FixedBytes<KeyTag>;
using Digest = FixedBytes<DigestTag>;
using Priority = FixedBytes<PriorityTag>;

}  // namespace cmt

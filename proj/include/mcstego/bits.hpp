#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mcstego {

using Bytes = std::vector<std::uint8_t>;

/// Sequence of bits; byte conversions are MSB-first within each octet.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n, bool value = false);

  static BitVector from_bytes(std::span<const std::uint8_t> bytes);
  static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t n_bits);
  /// Parses a string of '0'/'1' characters.
  static BitVector from_string(std::string_view bits);

  /// Packs into octets; the final partial octet is zero-padded at the low end.
  Bytes to_bytes() const;
  std::string to_string() const;

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  bool at(std::size_t i) const;
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }
  void push_back(bool value) { bits_.push_back(value ? 1 : 0); }
  void append(const BitVector& other);

  /// First n bits; throws ParameterError when n > size().
  BitVector prefix(std::size_t n) const;
  std::size_t count() const;

  /// Throws ParameterError on length mismatch.
  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector lhs, const BitVector& rhs) {
    lhs ^= rhs;
    return lhs;
  }
  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Throws FormatError on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

std::string base64_encode(std::span<const std::uint8_t> bytes);
Bytes base64_decode(std::string_view text);

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace mcstego

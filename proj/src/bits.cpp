#include "mcstego/bits.hpp"

#include <openssl/evp.h>

#include <algorithm>

#include "mcstego/errors.hpp"

namespace mcstego {

BitVector::BitVector(std::size_t n, bool value) : bits_(n, value ? 1 : 0) {}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes) {
  return from_bytes(bytes, bytes.size() * 8);
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t n_bits) {
  if (n_bits > bytes.size() * 8) {
    throw ParameterError("bit count exceeds available octets");
  }
  BitVector out;
  out.bits_.resize(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) {
    out.bits_[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
  }
  return out;
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector out;
  out.bits_.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw ParameterError("bit string may only contain '0' and '1'");
    }
    out.bits_.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

Bytes BitVector::to_bytes() const {
  Bytes out((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    out[i / 8] |= static_cast<std::uint8_t>(bits_[i] << (7 - i % 8));
  }
  return out;
}

std::string BitVector::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

bool BitVector::at(std::size_t i) const {
  if (i >= bits_.size()) throw ParameterError("bit index out of range");
  return bits_[i] != 0;
}

void BitVector::append(const BitVector& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitVector BitVector::prefix(std::size_t n) const {
  if (n > bits_.size()) throw ParameterError("prefix longer than bit vector");
  BitVector out;
  out.bits_.assign(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

std::size_t BitVector::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.size() != size()) {
    throw ParameterError("XOR of bit vectors with different lengths (" +
                         std::to_string(size()) + " vs " + std::to_string(other.size()) + ")");
  }
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= other.bits_[i];
  return *this;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

namespace {
int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw FormatError("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw FormatError("invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                          static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

Bytes base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw FormatError("base64 length is not a multiple of 4");
  Bytes out(3 * text.size() / 4);
  int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                          static_cast<int>(text.size()));
  if (n < 0) throw FormatError("invalid base64");
  // EVP_DecodeBlock keeps the padding octets; drop one per '='.
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

}  // namespace mcstego

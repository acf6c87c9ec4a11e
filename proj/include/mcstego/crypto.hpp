#pragma once

// Keyed primitives shared by every other module: HMAC-SHA-256, SHA-256,
// an HMAC counter-mode keystream, OS randomness for secrets and nonces.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "mcstego/bits.hpp"

namespace mcstego {

using Digest = std::array<std::uint8_t, 32>;

/// Shared secret held by both endpoints. 16..64 octets; never serialized
/// anywhere except the key file.
class MasterSecret {
 public:
  static constexpr std::size_t kMinBytes = 16;
  static constexpr std::size_t kMaxBytes = 64;

  /// Throws ParameterError when the length is outside [16, 64].
  explicit MasterSecret(Bytes bytes);

  std::span<const std::uint8_t> bytes() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }

  /// Reads a raw key file (the secret octets, nothing else).
  static MasterSecret load(const std::filesystem::path& path);
  /// Writes the raw octets and restricts the file to owner-read.
  void save(const std::filesystem::path& path) const;

  friend bool operator==(const MasterSecret&, const MasterSecret&) = default;

 private:
  Bytes bytes_;
};

struct Nonce {
  static constexpr std::size_t kBytes = 16;
  std::array<std::uint8_t, kBytes> bytes{};

  std::string hex() const { return to_hex(bytes); }
  friend auto operator<=>(const Nonce&, const Nonce&) = default;
};

struct Seed {
  std::uint64_t value = 0;
  friend auto operator<=>(const Seed&, const Seed&) = default;
};

/// Fresh secret of security_bits/8 octets; security_bits must be 128, 192 or 256.
MasterSecret setup(int security_bits);

Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data);
Digest sha256(std::span<const std::uint8_t> data);

/// Keystream block i = HMAC(key, uint64_be(i)); blocks concatenated, truncated
/// to n_bits. prng_stream(k, a) is a prefix of prng_stream(k, b) for a <= b.
BitVector prng_stream(std::span<const std::uint8_t> key, std::size_t n_bits);

Nonce fresh_nonce();
void secure_random(std::span<std::uint8_t> out);

/// First 8 octets of HMAC(key, label), big-endian.
Seed derive_seed(const MasterSecret& key, std::string_view label);

inline constexpr std::string_view kCoverLabel1 = "cover-1";
inline constexpr std::string_view kCoverLabel2 = "cover-2";

bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

}  // namespace mcstego

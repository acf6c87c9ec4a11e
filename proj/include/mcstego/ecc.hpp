#pragma once

// Reed-Solomon (255,223) over GF(2^8): primitive polynomial 0x11D, generator
// element 0x02, first consecutive root alpha^0. Corrects up to 16 symbol
// errors per block. Payloads longer than 223 octets are split into blocks;
// a short final block is a shortened code (implicit leading zeros).

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "mcstego/bits.hpp"
#include "mcstego/masking.hpp"

namespace mcstego {

namespace rs {

inline constexpr std::size_t kN = 255;
inline constexpr std::size_t kK = 223;
inline constexpr std::size_t kParity = kN - kK;
inline constexpr std::size_t kMaxErrors = kParity / 2;

class GaloisField {
 public:
  static const GaloisField& instance();

  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  std::uint8_t div(std::uint8_t a, std::uint8_t b) const;
  std::uint8_t inverse(std::uint8_t a) const { return div(1, a); }
  /// alpha^power for any integer power (reduced mod 255).
  std::uint8_t pow_alpha(int power) const;
  std::uint8_t log(std::uint8_t a) const { return static_cast<std::uint8_t>(log_[a]); }

 private:
  GaloisField();
  std::array<std::uint8_t, 512> exp_{};
  std::array<int, 256> log_{};
};

/// 32 parity octets for a data block of 1..223 octets.
std::array<std::uint8_t, kParity> encode_block(std::span<const std::uint8_t> data);

/// Corrects a codeword (data || parity, 33..255 octets) in place and returns
/// the number of corrected symbols. Throws UncorrectableError when more than
/// 16 symbols are wrong (detected).
std::size_t decode_block(std::span<std::uint8_t> codeword);

}  // namespace rs

struct EccPayload {
  BitVector data_bits;   // payload as given
  BitVector coded_bits;  // concatenated codewords, MSB-first octets
  std::size_t pad_bits = 0;  // zero bits appended to reach an octet boundary
  static constexpr std::size_t kN = rs::kN;
  static constexpr std::size_t kK = rs::kK;
};

/// Coded length in bits for a payload of data_len_bits: each started
/// 223-octet block contributes its data octets plus 32 parity octets.
std::size_t ecc_coded_bits(std::size_t data_len_bits);

/// Throws ParameterError for payloads shorter than 8 bits.
EccPayload ecc_encode(const MaskedPayload& b);

/// Throws LengthError when coded.size() != ecc_coded_bits(data_len_bits) and
/// UncorrectableError when any block exceeds the correction bound.
MaskedPayload ecc_decode(const BitVector& coded, std::size_t data_len_bits);

struct EccDecodeStats {
  MaskedPayload payload;
  std::size_t corrected_symbols = 0;
  std::size_t failed_blocks = 0;  // blocks left uncorrected (raw data kept)
};

/// Never throws on corruption: blocks that fail to decode keep their received
/// systematic octets. Length errors still throw.
EccDecodeStats ecc_decode_lenient(const BitVector& coded, std::size_t data_len_bits);

}  // namespace mcstego

#pragma once

// XOR masking layer: b = m ^ gamma1 ^ gamma2 ^ k_stego, and its inverse.

#include <cstddef>
#include <string_view>

#include "mcstego/bits.hpp"
#include "mcstego/crypto.hpp"
#include "mcstego/markov.hpp"

namespace mcstego {

struct StegoKeyStream {
  BitVector bits;
};

struct MaskedPayload {
  BitVector bits;
  std::size_t length() const { return bits.size(); }
};

/// P = HMAC(vpri, text); k0 = SHA-256(pad32(vpri) ^ P); stream = prng_stream(k0, n).
/// pad32 zero-pads or truncates the secret to 32 octets.
StegoKeyStream derive_stego_key(const MasterSecret& vpri, std::string_view gamma1_text,
                                std::size_t length_bits);
inline StegoKeyStream derive_stego_key(const MasterSecret& vpri, const CoverText& gamma1,
                                       std::size_t length_bits) {
  return derive_stego_key(vpri, gamma1.text, length_bits);
}

/// b = m ^ p. Throws ParameterError on length mismatch.
MaskedPayload mask(const BitVector& m, const BitVector& p_params);
BitVector unmask(const MaskedPayload& b, const BitVector& p_params);

/// Masking view of a cover message: prng_stream(SHA-256(UTF-8 text), n).
/// Raw UTF-8 text has fixed high bits in every octet, so it is whitened
/// before entering the XOR.
BitVector cover_parameter(std::string_view text, std::size_t length_bits);
inline BitVector cover_parameter(const CoverText& cover, std::size_t length_bits) {
  return cover_parameter(cover.text, length_bits);
}

/// Composite XOR of four equal-length bit vectors.
MaskedPayload protocol_mask(const BitVector& m, const BitVector& gamma1_bits,
                            const BitVector& gamma2_bits, const StegoKeyStream& ks);
/// Same operation; XOR is an involution.
BitVector protocol_unmask(const MaskedPayload& b, const BitVector& gamma1_bits,
                          const BitVector& gamma2_bits, const StegoKeyStream& ks);

/// Cover-text overloads: each cover enters through cover_parameter(cover, |m|).
MaskedPayload protocol_mask(const BitVector& m, const CoverText& gamma1, const CoverText& gamma2,
                            const StegoKeyStream& ks);
BitVector protocol_unmask(const MaskedPayload& b, const CoverText& gamma1,
                          const CoverText& gamma2, const StegoKeyStream& ks);

}  // namespace mcstego

#include "mcstego/masking.hpp"

#include <algorithm>

#include "mcstego/errors.hpp"

namespace mcstego {

StegoKeyStream derive_stego_key(const MasterSecret& vpri, std::string_view gamma1_text,
                                std::size_t length_bits) {
  if (length_bits == 0) throw ParameterError("stego key length must be positive");
  const Digest p = hmac_sha256(vpri.bytes(), as_bytes(gamma1_text));
  Digest mixed{};
  auto secret = vpri.bytes();
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    mixed[i] = static_cast<std::uint8_t>((i < secret.size() ? secret[i] : 0) ^ p[i]);
  }
  const Digest k0 = sha256(mixed);
  return StegoKeyStream{prng_stream(k0, length_bits)};
}

MaskedPayload mask(const BitVector& m, const BitVector& p_params) {
  if (m.size() != p_params.size()) throw ParameterError("mask: length mismatch");
  return MaskedPayload{m ^ p_params};
}

BitVector unmask(const MaskedPayload& b, const BitVector& p_params) {
  if (b.bits.size() != p_params.size()) throw ParameterError("unmask: length mismatch");
  return b.bits ^ p_params;
}

BitVector cover_parameter(std::string_view text, std::size_t length_bits) {
  return prng_stream(sha256(as_bytes(text)), length_bits);
}

MaskedPayload protocol_mask(const BitVector& m, const BitVector& gamma1_bits,
                            const BitVector& gamma2_bits, const StegoKeyStream& ks) {
  const std::size_t n = m.size();
  if (gamma1_bits.size() != n || gamma2_bits.size() != n || ks.bits.size() != n) {
    throw ParameterError("protocol_mask: all operands must have the payload length");
  }
  BitVector b = m;
  b ^= gamma1_bits;
  b ^= gamma2_bits;
  b ^= ks.bits;
  return MaskedPayload{std::move(b)};
}

BitVector protocol_unmask(const MaskedPayload& b, const BitVector& gamma1_bits,
                          const BitVector& gamma2_bits, const StegoKeyStream& ks) {
  return protocol_mask(b.bits, gamma1_bits, gamma2_bits, ks).bits;
}

MaskedPayload protocol_mask(const BitVector& m, const CoverText& gamma1, const CoverText& gamma2,
                            const StegoKeyStream& ks) {
  return protocol_mask(m, cover_parameter(gamma1, m.size()), cover_parameter(gamma2, m.size()),
                       ks);
}

BitVector protocol_unmask(const MaskedPayload& b, const CoverText& gamma1,
                          const CoverText& gamma2, const StegoKeyStream& ks) {
  return protocol_unmask(b, cover_parameter(gamma1, b.length()),
                         cover_parameter(gamma2, b.length()), ks);
}

}  // namespace mcstego

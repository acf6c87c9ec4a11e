#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "mcstego/ecc.hpp"
#include "mcstego/errors.hpp"
#include "mcstego/markov.hpp"

using namespace mcstego;

namespace {

Bytes random_bytes(SplitMix64& rng, std::size_t n) {
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng.next() >> 56);
  return b;
}

// Corrupts `count` distinct positions of v with non-zero error values.
void corrupt(SplitMix64& rng, std::span<std::uint8_t> v, std::size_t count) {
  std::set<std::size_t> pos;
  while (pos.size() < count) pos.insert(rng.next() % v.size());
  for (std::size_t p : pos) v[p] ^= static_cast<std::uint8_t>(1 + rng.next() % 255);
}

}  // namespace

// Parity values from the reedsolo package (tests/oracles/gen_vectors.py).
TEST(ReedSolomon, ParityMatchesIndependentEncoder) {
  const auto p1 = rs::encode_block(as_bytes("hello world"));
  EXPECT_EQ(to_hex(p1), "6aa49af457d244b5a085775c3390f4f4140172d13ff4b9b5b3ace547619eb9d3");
  Bytes full(223);
  std::iota(full.begin(), full.end(), 0);
  EXPECT_EQ(to_hex(rs::encode_block(full)), "41841183b11fdb537421939696cda70e1db5c86684af222564b89cc6069f172e");
}

TEST(ReedSolomon, FieldArithmetic) {
  const auto& gf = rs::GaloisField::instance();
  EXPECT_EQ(gf.pow_alpha(8), 0x1D);
  for (int a = 1; a < 256; ++a) {
    EXPECT_EQ(gf.mul(static_cast<std::uint8_t>(a), gf.inverse(static_cast<std::uint8_t>(a))), 1);
  }
  EXPECT_THROW(gf.div(1, 0), ParameterError);
}

TEST(ReedSolomon, BlockSizeBounds) {
  EXPECT_THROW(rs::encode_block(Bytes{}), ParameterError);
  EXPECT_THROW(rs::encode_block(Bytes(224)), ParameterError);
  Bytes short_word(32);
  EXPECT_THROW(rs::decode_block(short_word), LengthError);
}

TEST(ReedSolomon, SixteenErrorsCorrectedSeventeenDetected) {
  SplitMix64 rng(99);
  for (int t = 0; t < 200; ++t) {
    const Bytes data = random_bytes(rng, 223);
    Bytes word = data;
    const auto parity = rs::encode_block(data);
    word.insert(word.end(), parity.begin(), parity.end());

    Bytes sixteen = word;
    corrupt(rng, sixteen, 16);
    EXPECT_EQ(rs::decode_block(sixteen), 16u);
    EXPECT_EQ(sixteen, word);

    Bytes seventeen = word;
    corrupt(rng, seventeen, 17);
    EXPECT_THROW(rs::decode_block(seventeen), UncorrectableError);
  }
}

TEST(ReedSolomon, ShortenedBlocksCorrectToo) {
  SplitMix64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t len = 1 + rng.next() % 100;
    const Bytes data = random_bytes(rng, len);
    Bytes word = data;
    const auto parity = rs::encode_block(data);
    word.insert(word.end(), parity.begin(), parity.end());
    Bytes damaged = word;
    corrupt(rng, damaged, std::min<std::size_t>(16, word.size()));
    rs::decode_block(damaged);
    EXPECT_EQ(damaged, word);
  }
}

TEST(Ecc, CodedLengths) {
  EXPECT_EQ(ecc_coded_bits(223 * 8), 255u * 8);
  EXPECT_EQ(ecc_coded_bits(8), (1u + 32) * 8);
  EXPECT_EQ(ecc_coded_bits(224 * 8), (224u + 64) * 8);
  EXPECT_EQ(ecc_coded_bits(9), (2u + 32) * 8);
  const auto coded = ecc_encode(MaskedPayload{BitVector(223 * 8)});
  EXPECT_EQ(coded.coded_bits.size(), 255u * 8);
}

TEST(Ecc, RoundTripAllLengths) {
  SplitMix64 rng(17);
  for (std::size_t n : {8u, 9u, 15u, 64u, 512u, 1784u, 1785u, 4000u}) {
    BitVector bits(n);
    for (std::size_t i = 0; i < n; ++i) bits.set(i, rng.next() >> 63);
    const EccPayload e = ecc_encode(MaskedPayload{bits});
    EXPECT_EQ(e.pad_bits, (8 - n % 8) % 8);
    EXPECT_EQ(ecc_decode(e.coded_bits, n).bits, bits);
  }
  EXPECT_THROW(ecc_encode(MaskedPayload{BitVector(7)}), ParameterError);
}

TEST(Ecc, LengthInconsistencyIsSignalled) {
  const EccPayload e = ecc_encode(MaskedPayload{BitVector(64)});
  EXPECT_THROW(ecc_decode(e.coded_bits, 72), LengthError);
  EXPECT_THROW(ecc_decode(e.coded_bits.prefix(e.coded_bits.size() - 8), 64), LengthError);
}

TEST(Ecc, MultiBlockCorruptionBound) {
  SplitMix64 rng(23);
  const std::size_t n = 500 * 8;  // three blocks: 223 + 223 + 54
  BitVector bits(n);
  for (std::size_t i = 0; i < n; ++i) bits.set(i, rng.next() >> 63);
  const EccPayload e = ecc_encode(MaskedPayload{bits});
  Bytes coded = e.coded_bits.to_bytes();
  corrupt(rng, std::span(coded).subspan(0, 255), 16);
  corrupt(rng, std::span(coded).subspan(255, 255), 16);
  corrupt(rng, std::span(coded).subspan(510), 16);
  EXPECT_EQ(ecc_decode(BitVector::from_bytes(coded), n).bits, bits);
  corrupt(rng, std::span(coded).subspan(255, 255), 10);
  EXPECT_THROW(ecc_decode(BitVector::from_bytes(coded), n), UncorrectableError);
}

TEST(Ecc, LenientDecodeKeepsRawBlocks) {
  SplitMix64 rng(31);
  const std::size_t n = 300 * 8;
  BitVector bits(n);
  for (std::size_t i = 0; i < n; ++i) bits.set(i, rng.next() >> 63);
  Bytes coded = ecc_encode(MaskedPayload{bits}).coded_bits.to_bytes();
  corrupt(rng, std::span(coded).subspan(0, 223), 40);   // beyond repair
  corrupt(rng, std::span(coded).subspan(255, 77), 5);  // repairable
  const EccDecodeStats stats = ecc_decode_lenient(BitVector::from_bytes(coded), n);
  EXPECT_EQ(stats.failed_blocks, 1u);
  EXPECT_EQ(stats.corrected_symbols, 5u);
  const Bytes out = stats.payload.bits.to_bytes();
  EXPECT_TRUE(std::equal(out.begin(), out.begin() + 223, coded.begin()));
  const Bytes truth = bits.to_bytes();
  EXPECT_TRUE(std::equal(out.begin() + 223, out.end(), truth.begin() + 223, truth.end()));
}

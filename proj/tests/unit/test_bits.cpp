#include <gtest/gtest.h>

#include "mcstego/bits.hpp"
#include "mcstego/errors.hpp"

using namespace mcstego;

TEST(BitVector, BytesRoundTripMsbFirst) {
  const Bytes raw{0xA5, 0x01};
  const BitVector v = BitVector::from_bytes(raw);
  EXPECT_EQ(v.to_string(), "1010010100000001");
  EXPECT_EQ(v.to_bytes(), raw);
}

TEST(BitVector, PartialOctetIsZeroPadded) {
  const BitVector v = BitVector::from_string("101");
  EXPECT_EQ(v.to_bytes(), Bytes{0xA0});
  EXPECT_EQ(BitVector::from_bytes(Bytes{0xFF}, 3).to_string(), "111");
}

TEST(BitVector, XorRequiresEqualLength) {
  BitVector a = BitVector::from_string("1100");
  EXPECT_EQ((a ^ BitVector::from_string("1010")).to_string(), "0110");
  EXPECT_THROW(a ^= BitVector::from_string("10"), ParameterError);
}

TEST(BitVector, PrefixAndCount) {
  const BitVector v = BitVector::from_string("11010");
  EXPECT_EQ(v.prefix(3).to_string(), "110");
  EXPECT_EQ(v.count(), 3u);
  EXPECT_THROW((void)v.prefix(6), ParameterError);
  EXPECT_THROW((void)v.at(5), ParameterError);
}

TEST(BitVector, RejectsNonBinaryText) { EXPECT_THROW(BitVector::from_string("102"), ParameterError); }

TEST(Hex, RoundTripAndErrors) {
  const Bytes raw{0x00, 0xde, 0xad, 0xbe, 0xef};
  EXPECT_EQ(to_hex(raw), "00deadbeef");
  EXPECT_EQ(from_hex("00DEADbeef"), raw);
  EXPECT_THROW(from_hex("abc"), FormatError);
  EXPECT_THROW(from_hex("zz"), FormatError);
}

TEST(Base64, KnownValues) {
  EXPECT_EQ(base64_encode(as_bytes("")), "");
  EXPECT_EQ(base64_encode(as_bytes("f")), "Zg==");
  EXPECT_EQ(base64_encode(as_bytes("fo")), "Zm8=");
  EXPECT_EQ(base64_encode(as_bytes("foobar")), "Zm9vYmFy");
  EXPECT_EQ(base64_decode("Zg=="), Bytes{'f'});
  EXPECT_EQ(base64_decode("Zm8="), (Bytes{'f', 'o'}));
  EXPECT_THROW(base64_decode("Zm8"), FormatError);
}

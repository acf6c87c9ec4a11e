#include <gtest/gtest.h>

#include <array>
#include <filesystem>
#include <set>

#include "mcstego/crypto.hpp"
#include "mcstego/errors.hpp"
#include "mcstego/metrics.hpp"

using namespace mcstego;

namespace {

MasterSecret counting_key() {
  Bytes k(16);
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<std::uint8_t>(i);
  return MasterSecret(k);
}

}  // namespace

// Reference values below come from tests/oracles/gen_vectors.py (Python
// hashlib/hmac), never from this code base.

TEST(Crypto, HmacRfc4231Case1) {
  const Bytes key(20, 0x0b);
  const Digest tag = hmac_sha256(key, as_bytes("Hi There"));
  EXPECT_EQ(to_hex(tag), "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");
}

TEST(Crypto, HmacIsDeterministicAndBitSensitive) {
  const Bytes key(32, 0x42);
  Bytes data{1, 2, 3, 4};
  const Digest a = hmac_sha256(key, data);
  EXPECT_EQ(a, hmac_sha256(key, data));
  data[2] ^= 0x01;
  EXPECT_NE(a, hmac_sha256(key, data));
}

TEST(Crypto, Sha256KnownDigests) {
  EXPECT_EQ(to_hex(sha256({})), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(to_hex(sha256(as_bytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Crypto, PrngStreamMatchesCounterModeOracle) {
  const MasterSecret k = counting_key();
  const BitVector s = prng_stream(k.bytes(), 300);
  ASSERT_EQ(s.size(), 300u);
  const Bytes expected =
      from_hex("c6b0c5d1fb6453704bbc7024fa5bca77a7bf4b446651140d7be0b4e3218eb9de0825399ee1cb");
  EXPECT_EQ(s, BitVector::from_bytes(expected, 300));
}

TEST(Crypto, PrngStreamBlocksAreHmacOfCounter) {
  const MasterSecret k = counting_key();
  const BitVector s = prng_stream(k.bytes(), 300);
  const std::array<std::uint8_t, 8> c0{}, c1{0, 0, 0, 0, 0, 0, 0, 1};
  EXPECT_EQ(s.prefix(256), BitVector::from_bytes(hmac_sha256(k.bytes(), c0)));
  BitVector second = BitVector::from_bytes(hmac_sha256(k.bytes(), c1), 44);
  BitVector tail;
  for (std::size_t i = 256; i < 300; ++i) tail.push_back(s[i]);
  EXPECT_EQ(tail, second);
}

TEST(Crypto, PrngStreamPrefixProperty) {
  const Bytes key(24, 0x17);
  EXPECT_TRUE(prng_stream(key, 0).empty());
  const BitVector long_stream = prng_stream(key, 1000);
  for (std::size_t n : {1u, 7u, 255u, 256u, 257u, 999u}) {
    EXPECT_EQ(prng_stream(key, n), long_stream.prefix(n)) << n;
  }
}

TEST(Crypto, DeriveSeedOracle) {
  const MasterSecret k = counting_key();
  EXPECT_EQ(derive_seed(k, kCoverLabel1).value, 0xd687b8b76bce82c9ull);
  EXPECT_EQ(derive_seed(k, kCoverLabel2).value, 0x5bb6a28c29b00648ull);
}

TEST(Crypto, DeriveSeedLabelsDifferAcrossKeys) {
  for (int i = 0; i < 100; ++i) {
    const MasterSecret k = setup(128);
    EXPECT_NE(derive_seed(k, kCoverLabel1), derive_seed(k, kCoverLabel2));
    EXPECT_EQ(derive_seed(k, kCoverLabel1), derive_seed(k, kCoverLabel1));
  }
}

TEST(Crypto, SetupLengths) {
  EXPECT_EQ(setup(128).size(), 16u);
  EXPECT_EQ(setup(192).size(), 24u);
  EXPECT_EQ(setup(256).size(), 32u);
  EXPECT_NE(setup(128), setup(128));
  EXPECT_THROW(setup(100), ParameterError);
}

TEST(Crypto, MasterSecretLengthBounds) {
  EXPECT_THROW(MasterSecret(Bytes(15)), ParameterError);
  EXPECT_THROW(MasterSecret(Bytes(65)), ParameterError);
  EXPECT_NO_THROW(MasterSecret(Bytes(16)));
  EXPECT_NO_THROW(MasterSecret(Bytes(64)));
}

TEST(Crypto, KeyFileRoundTripIsOwnerReadOnly) {
  const auto path = std::filesystem::temp_directory_path() / "mcstego_test.key";
  std::filesystem::remove(path);
  const MasterSecret k = setup(256);
  k.save(path);
  EXPECT_EQ(MasterSecret::load(path), k);
  EXPECT_EQ(std::filesystem::file_size(path), 32u);
  const auto perms = std::filesystem::status(path).permissions();
  EXPECT_EQ(perms & std::filesystem::perms::all, std::filesystem::perms::owner_read);
  std::filesystem::permissions(path, std::filesystem::perms::owner_write, std::filesystem::perm_options::add);
  std::filesystem::remove(path);
}

TEST(Crypto, NoncesAreUniqueAndHighEntropy) {
  std::set<Nonce> seen;
  std::string all;
  for (int i = 0; i < 10000; ++i) {
    const Nonce n = fresh_nonce();
    EXPECT_TRUE(seen.insert(n).second);
    all.append(n.bytes.begin(), n.bytes.end());
  }
  EXPECT_GT(shannon_entropy(all), 7.9);
}

TEST(Crypto, ConstantTimeEqual) {
  const Bytes a{1, 2, 3}, b{1, 2, 3}, c{1, 2, 4};
  EXPECT_TRUE(constant_time_equal(a, b));
  EXPECT_FALSE(constant_time_equal(a, c));
  EXPECT_FALSE(constant_time_equal(a, Bytes{1, 2}));
}

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <set>

#include "mcstego/errors.hpp"
#include "mcstego/fixtures.hpp"
#include "mcstego/markov.hpp"
#include "mcstego/metrics.hpp"

using namespace mcstego;

TEST(Metrics, BitErrorRate) {
  const BitVector a = BitVector::from_string("1010");
  EXPECT_EQ(ber(a, a), 0.0);
  EXPECT_EQ(ber(a, BitVector::from_string("0101")), 1.0);
  EXPECT_EQ(ber(a, BitVector::from_string("1110")), 0.25);
  EXPECT_THROW(ber(a, BitVector(3)), ParameterError);
  EXPECT_THROW(ber(BitVector(), BitVector()), ParameterError);
}

TEST(Metrics, BerIsSymmetricAndSatisfiesTriangleBound) {
  SplitMix64 rng(1);
  for (int t = 0; t < 200; ++t) {
    BitVector a(64), b(64), c(64);
    for (std::size_t i = 0; i < 64; ++i) {
      a.set(i, rng.next() >> 63);
      b.set(i, rng.next() >> 63);
      c.set(i, rng.next() >> 63);
    }
    EXPECT_EQ(ber(a, b), ber(b, a));
    EXPECT_LE(ber(a, c), ber(a, b) + ber(b, c) + 1e-12);
  }
}

TEST(Metrics, Pearson) {
  const BitVector a = BitVector::from_string("1100");
  EXPECT_DOUBLE_EQ(*pearson(a, a), 1.0);
  EXPECT_DOUBLE_EQ(*pearson(a, BitVector::from_string("0011")), -1.0);
  EXPECT_NEAR(*pearson(a, BitVector::from_string("1010")), 0.0, 1e-15);
  EXPECT_FALSE(pearson(a, BitVector::from_string("1111")).has_value());
  EXPECT_FALSE(pearson(BitVector(4), a).has_value());
  EXPECT_THROW(pearson(a, BitVector(3)), ParameterError);
}

TEST(Metrics, PsnrKnownValues) {
  const RasterImage a(512, 512, 3, 100);
  EXPECT_EQ(psnr(a, a), 110.0);
  EXPECT_EQ(psnr(a, a, 99.0), 99.0);
  RasterImage b = a;
  b.at(10, 10, 1) ^= 1;
  EXPECT_NEAR(psnr(a, b), 107.0874153754, 1e-9);
  EXPECT_NEAR(psnr(RasterImage(8, 8, 1, 0), RasterImage(8, 8, 1, 255)), 0.0, 1e-12);
  EXPECT_THROW(psnr(a, RasterImage(512, 512, 1)), ParameterError);
}

TEST(Metrics, PsnrDecreasesWithError) {
  const RasterImage a(32, 32, 1, 128);
  RasterImage b = a;
  double last = psnr(a, b);
  for (int i = 0; i < 50; ++i) {
    b.samples()[static_cast<std::size_t>(i) * 7] ^= 1;
    const double now = psnr(a, b);
    EXPECT_LT(now, last);
    last = now;
  }
}

TEST(Metrics, SsimOracle) {
  RasterImage a(12, 10, 1), b(12, 10, 1);
  for (std::size_t r = 0; r < 10; ++r) {
    for (std::size_t c = 0; c < 12; ++c) {
      a.at(r, c) = static_cast<std::uint8_t>((r * 7 + c * 13) % 256);
      b.at(r, c) = (r % 3 == 0 && c % 2 == 0) ? static_cast<std::uint8_t>(255 - a.at(r, c)) : a.at(r, c);
    }
  }
  EXPECT_NEAR(ssim(a, b), 0.560443222959, 1e-9);
}

TEST(Metrics, SsimIdentitySymmetryAndShape) {
  const RasterImage a = synthetic_cover(1, 64, 48), b = synthetic_cover(2, 64, 48);
  EXPECT_EQ(ssim(a, a), 1.0);
  EXPECT_DOUBLE_EQ(ssim(a, b), ssim(b, a));
  EXPECT_LT(ssim(a, b), 0.9);
  EXPECT_THROW(ssim(RasterImage(7, 7, 1), RasterImage(7, 7, 1)), ParameterError);
  EXPECT_THROW(ssim(a, RasterImage(64, 48, 1)), ParameterError);
}

TEST(Metrics, SsimContrastStructureIsShiftInvariant) {
  // The luminance factor reacts to a common brightness offset; the
  // contrast-structure factor does not.
  RasterImage a = synthetic_cover(3, 40, 40, 1), b = synthetic_cover(4, 40, 40, 1);
  for (auto& s : a.samples()) s = static_cast<std::uint8_t>(40 + s / 2);
  for (auto& s : b.samples()) s = static_cast<std::uint8_t>(40 + s / 2);
  RasterImage as = a, bs = b;
  for (auto& s : as.samples()) s = static_cast<std::uint8_t>(s + 60);
  for (auto& s : bs.samples()) s = static_cast<std::uint8_t>(s + 60);
  EXPECT_NEAR(ssim_contrast_structure(a, b), ssim_contrast_structure(as, bs), 1e-9);
  EXPECT_EQ(ssim(as, as), 1.0);
}

TEST(Metrics, ShannonEntropy) {
  EXPECT_EQ(shannon_entropy("aaaa"), 0.0);
  EXPECT_DOUBLE_EQ(shannon_entropy("ab"), 1.0);
  EXPECT_THROW(shannon_entropy(""), ParameterError);
  // Values from the Python oracle.
  EXPECT_NEAR(shannon_entropy("hops quietly through the garden, nibbling on fresh clover."), 4.198691, 1e-6);
  EXPECT_NEAR(shannon_entropy("hops quietly through the garden, nibbling on fresh clover"), 4.144489, 1e-6);
}

TEST(Metrics, EntropyBoundedByAlphabet) {
  for (const char* s : {"abcabc", "the cat sat on the mat", "zzzzy"}) {
    std::set<char> alphabet(s, s + std::strlen(s));
    EXPECT_LE(shannon_entropy(s), std::log2(static_cast<double>(alphabet.size())) + 1e-12);
  }
}

TEST(Metrics, Syllables) {
  EXPECT_EQ(count_syllables("cat"), 1);
  EXPECT_EQ(count_syllables("the"), 1);
  EXPECT_EQ(count_syllables("garden,"), 2);
  EXPECT_EQ(count_syllables("quietly"), 2);
  EXPECT_EQ(count_syllables("redundancy"), 4);
  EXPECT_EQ(count_syllables("123"), 1);
}

TEST(Metrics, Readability) {
  EXPECT_NEAR(flesch_reading_ease("The cat sat."), 119.19, 1e-9);
  EXPECT_NEAR(flesch_kincaid_grade("The cat sat."), -2.62, 1e-9);
  const char* technical = "Error correcting codes add structured redundancy to transmitted data.";
  EXPECT_NEAR(flesch_reading_ease(technical), 0.30, 1e-6);
  EXPECT_NEAR(flesch_kincaid_grade(technical), 15.453333, 1e-6);
  EXPECT_NEAR(flesch_reading_ease("The cat sat. The cat sat. The cat sat."), 119.19, 1e-9);
  EXPECT_LT(flesch_reading_ease("Authentication prevents undetected modification."), 0.0);
  EXPECT_THROW(flesch_reading_ease(" "), ParameterError);
}

TEST(Metrics, SuccessRate) {
  std::array<bool, 3> all{true, true, true}, none{false, false, false};
  EXPECT_EQ(success_rate(all), 1.0);
  EXPECT_EQ(success_rate(none), 0.0);
  std::array<bool, 30> mostly{};
  std::fill(mostly.begin(), mostly.begin() + 27, true);
  EXPECT_DOUBLE_EQ(success_rate(mostly), 0.9);
  EXPECT_THROW(success_rate(std::span<const bool>{}), ParameterError);
}

TEST(Metrics, MeanStd) {
  const std::array<double, 4> v{1, 2, 3, 4};
  const MeanStd s = mean_std(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.stddev, std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_EQ(mean_std(std::span<const double>{}).n, 0u);
}

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "mcstego/embedding.hpp"
#include "mcstego/errors.hpp"
#include "mcstego/markov.hpp"
#include "mcstego/fixtures.hpp"
#include "mcstego/metrics.hpp"

using namespace mcstego;

namespace {

BitVector random_bits(SplitMix64& rng, std::size_t n) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, rng.next() >> 63);
  return v;
}

RasterImage random_image(SplitMix64& rng, std::size_t w, std::size_t h, std::size_t ch) {
  RasterImage img(w, h, ch);
  for (auto& s : img.samples()) s = static_cast<std::uint8_t>(rng.next() >> 56);
  return img;
}

// Direct definition: population variance of the clipped window of LSB-cleared luma.
double brute_variance(const RasterImage& img, std::size_t r, std::size_t c, int radius) {
  const auto lum = masked_luminance(img);
  double sum = 0, sum_sq = 0;
  int n = 0;
  for (long rr = static_cast<long>(r) - radius; rr <= static_cast<long>(r) + radius; ++rr) {
    for (long cc = static_cast<long>(c) - radius; cc <= static_cast<long>(c) + radius; ++cc) {
      if (rr < 0 || cc < 0 || rr >= static_cast<long>(img.height()) || cc >= static_cast<long>(img.width())) continue;
      const double v = lum[static_cast<std::size_t>(rr) * img.width() + static_cast<std::size_t>(cc)];
      sum += v;
      sum_sq += v * v;
      ++n;
    }
  }
  const double mean = sum / n;
  return sum_sq / n - mean * mean;
}

}  // namespace

TEST(Embedding, ConstantImageHasZeroVariance) {
  const VarianceMap v = variance_map(RasterImage(9, 7, 3, 200), 2);
  for (double x : v.values()) EXPECT_EQ(x, 0.0);
}

TEST(Embedding, SingleBrightCentreVariance) {
  RasterImage img(3, 3, 1, 0);
  img.at(1, 1) = 255;
  const VarianceMap v = variance_map(img, 1);
  // numpy oracle on the LSB-cleared window {254, 0 x 8}.
  EXPECT_NEAR(v.at(1, 1), 6371.9506172840, 1e-9);
  // Corner window clipped to 2x2.
  EXPECT_NEAR(v.at(0, 0), 12096.75, 1e-9);
}

TEST(Embedding, VarianceMatchesBruteForce) {
  SplitMix64 rng(3);
  for (int t = 0; t < 5; ++t) {
    const RasterImage img = random_image(rng, 13, 11, t % 2 ? 3 : 1);
    for (int radius : {1, 2, 3}) {
      const VarianceMap v = variance_map(img, radius);
      for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) {
          EXPECT_NEAR(v.at(r, c), brute_variance(img, r, c, radius), 1e-6);
        }
      }
    }
  }
  EXPECT_THROW(variance_map(RasterImage(4, 4, 1), 0), ParameterError);
}

TEST(Embedding, VarianceIgnoresLsbs) {
  SplitMix64 rng(4);
  RasterImage img = random_image(rng, 32, 32, 3);
  const VarianceMap before = variance_map(img, 2);
  for (int i = 0; i < 100; ++i) img.samples()[rng.next() % img.capacity()] ^= 1;
  EXPECT_EQ(variance_map(img, 2).values(), before.values());
}

TEST(Embedding, PlanRankingRule) {
  const VarianceMap v(2, 2, 1, {5, 9, 9, 1});
  const EmbeddingPlan plan = plan_from_variance(v, 1, 3);
  ASSERT_EQ(plan.slots.size(), 3u);
  EXPECT_EQ(plan.slots[0], (Slot{0, 1, 0}));
  EXPECT_EQ(plan.slots[1], (Slot{1, 0, 0}));
  EXPECT_EQ(plan.slots[2], (Slot{0, 0, 0}));
}

TEST(Embedding, ConstantImagePlanIsRowMajor) {
  const RasterImage img(5, 4, 3, 90);
  const EmbeddingPlan plan = plan_embedding(img, img.capacity());
  for (std::size_t i = 0; i < plan.slots.size(); ++i) {
    EXPECT_EQ(plan.slots[i].row, i / 15);
    EXPECT_EQ(plan.slots[i].col, (i / 3) % 5);
    EXPECT_EQ(plan.slots[i].channel, i % 3);
  }
}

TEST(Embedding, FullCapacityPlanCoversEverySlotOnce) {
  SplitMix64 rng(8);
  const RasterImage img = random_image(rng, 17, 9, 3);
  const EmbeddingPlan plan = plan_embedding(img, img.capacity());
  std::set<std::tuple<int, int, int>> seen;
  for (const Slot& s : plan.slots) seen.emplace(s.row, s.col, s.channel);
  EXPECT_EQ(seen.size(), img.capacity());
  EXPECT_THROW(plan_embedding(img, img.capacity() + 1), CapacityError);
  EXPECT_THROW(embed(img, BitVector(img.capacity() + 1)), CapacityError);
  EXPECT_THROW(extract(img, img.capacity() + 1), CapacityError);
}

TEST(Embedding, PlanPrefixesAreConsistent) {
  SplitMix64 rng(12);
  const RasterImage img = random_image(rng, 40, 30, 3);
  const EmbeddingPlan big = plan_embedding(img, 900);
  const EmbeddingPlan small = plan_embedding(img, 301);
  EXPECT_TRUE(std::equal(small.slots.begin(), small.slots.end(), big.slots.begin()));
}

TEST(Embedding, EmbedExtractRoundTrip) {
  SplitMix64 rng(21);
  for (int t = 0; t < 500; ++t) {
    const std::size_t w = 8 + rng.next() % 24, h = 8 + rng.next() % 24, ch = t % 2 ? 3 : 1;
    const RasterImage img = random_image(rng, w, h, ch);
    const BitVector bits = random_bits(rng, rng.next() % (img.capacity() + 1));
    const int radius = 1 + static_cast<int>(rng.next() % 3);
    const RasterImage stego = embed(img, bits, radius);
    ASSERT_EQ(extract(stego, bits.size(), radius), bits);
    // Only LSBs may differ.
    for (std::size_t i = 0; i < img.capacity(); ++i) {
      EXPECT_EQ(img.samples()[i] & 0xFE, stego.samples()[i] & 0xFE);
    }
  }
}

TEST(Embedding, EmbeddingExistingBitsIsNoOp) {
  SplitMix64 rng(22);
  const RasterImage img = random_image(rng, 20, 20, 3);
  const BitVector existing = extract(img, 500);
  EXPECT_EQ(embed(img, existing), img);
}

TEST(Embedding, ImperceptibilityBound) {
  SplitMix64 rng(23);
  const RasterImage cover = synthetic_cover(1);
  const BitVector bits = random_bits(rng, 512);
  const RasterImage stego = embed(cover, bits);
  const double n = static_cast<double>(cover.capacity());
  EXPECT_GE(psnr(cover, stego), 10.0 * std::log10(255.0 * 255.0 * n / 512.0));
  EXPECT_GE(psnr(cover, stego), 60.0);
  EXPECT_GE(ssim(cover, stego), 0.99);
}

TEST(Embedding, SecondBitChangeOnlyMovesNearbyPixels) {
  SplitMix64 rng(30);
  const int radius = 2;
  for (int t = 0; t < 50; ++t) {
    RasterImage img = random_image(rng, 24, 24, 1);
    const VarianceMap before = variance_map(img, radius);
    const EmbeddingPlan plan_before = plan_embedding(img, img.capacity(), radius);
    const std::size_t r = rng.next() % 24, c = rng.next() % 24;
    img.at(r, c) ^= 0x02;
    const VarianceMap after = variance_map(img, radius);
    auto near = [&](std::size_t rr, std::size_t cc) {
      return std::abs(static_cast<long>(rr) - static_cast<long>(r)) <= radius &&
             std::abs(static_cast<long>(cc) - static_cast<long>(c)) <= radius;
    };
    for (std::size_t rr = 0; rr < 24; ++rr) {
      for (std::size_t cc = 0; cc < 24; ++cc) {
        if (!near(rr, cc)) EXPECT_EQ(before.at(rr, cc), after.at(rr, cc));
      }
    }
    // Outside the window the relative slot order is untouched.
    auto far_slots = [&](const EmbeddingPlan& p) {
      std::vector<Slot> out;
      for (const Slot& s : p.slots) {
        if (!near(s.row, s.col)) out.push_back(s);
      }
      return out;
    };
    EXPECT_EQ(far_slots(plan_before), far_slots(plan_embedding(img, img.capacity(), radius)));
  }
}

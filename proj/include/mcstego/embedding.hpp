#pragma once

// Variance-guided LSB embedding. Slot selection is computed on the image with
// every LSB cleared, so embedding never changes the receiver's slot order.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mcstego/bits.hpp"
#include "mcstego/image.hpp"

namespace mcstego {

inline constexpr int kDefaultWindowRadius = 2;

class VarianceMap {
 public:
  VarianceMap(std::size_t width, std::size_t height, int window_radius,
              std::vector<double> values);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  int window_radius() const { return window_radius_; }
  double at(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t width_;
  std::size_t height_;
  int window_radius_;
  std::vector<double> values_;
};

struct Slot {
  std::uint32_t row;
  std::uint32_t col;
  std::uint8_t channel;
  friend bool operator==(const Slot&, const Slot&) = default;
};

struct EmbeddingPlan {
  std::vector<Slot> slots;  // slot i carries payload bit i
};

/// Luminance plane of the LSB-cleared image (samples & 0xFE, then luma for RGB).
std::vector<std::uint8_t> masked_luminance(const RasterImage& img);

/// Population variance of the clipped (2W+1)^2 window around each pixel of
/// masked_luminance(img). Throws ParameterError when window_radius < 1.
VarianceMap variance_map(const RasterImage& img, int window_radius = kDefaultWindowRadius);

/// Ranking step alone: pixels by variance descending, ties by (row, col);
/// channels 0..C-1 within a pixel.
EmbeddingPlan plan_from_variance(const VarianceMap& vmap, std::size_t channels, std::size_t n_bits);
/// Pixels by variance descending, ties by (row, col); channels 0..C-1 within
/// a pixel. Throws CapacityError when n_bits exceeds the sample count.
EmbeddingPlan plan_embedding(const RasterImage& img, std::size_t n_bits,
                             int window_radius = kDefaultWindowRadius);

RasterImage embed(const RasterImage& img, const BitVector& bits,
                  int window_radius = kDefaultWindowRadius);
BitVector extract(const RasterImage& stego, std::size_t n_bits,
                  int window_radius = kDefaultWindowRadius);

}  // namespace mcstego

#include "mcstego/embedding.hpp"

#include <algorithm>
#include <numeric>

#include "mcstego/errors.hpp"

namespace mcstego {

VarianceMap::VarianceMap(std::size_t width, std::size_t height, int window_radius,
                         std::vector<double> values)
    : width_(width), height_(height), window_radius_(window_radius), values_(std::move(values)) {
  if (values_.size() != width_ * height_) throw ParameterError("variance map size mismatch");
}

std::vector<std::uint8_t> masked_luminance(const RasterImage& img) {
  const std::size_t w = img.width(), h = img.height();
  std::vector<std::uint8_t> lum(w * h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (img.channels() == 1) {
        lum[r * w + c] = img.at(r, c) & 0xFE;
      } else {
        lum[r * w + c] = luma(img.at(r, c, 0) & 0xFE, img.at(r, c, 1) & 0xFE,
                              img.at(r, c, 2) & 0xFE);
      }
    }
  }
  return lum;
}

VarianceMap variance_map(const RasterImage& img, int window_radius) {
  if (window_radius < 1) throw ParameterError("window radius must be at least 1");
  const std::size_t w = img.width(), h = img.height();
  const std::vector<std::uint8_t> lum = masked_luminance(img);

  // Summed-area tables of x and x^2; exact in 64-bit integers.
  const std::size_t sw = w + 1;
  std::vector<std::int64_t> s1(sw * (h + 1), 0), s2(sw * (h + 1), 0);
  for (std::size_t r = 0; r < h; ++r) {
    std::int64_t row1 = 0, row2 = 0;
    for (std::size_t c = 0; c < w; ++c) {
      const std::int64_t v = lum[r * w + c];
      row1 += v;
      row2 += v * v;
      s1[(r + 1) * sw + c + 1] = s1[r * sw + c + 1] + row1;
      s2[(r + 1) * sw + c + 1] = s2[r * sw + c + 1] + row2;
    }
  }
  auto box = [&](const std::vector<std::int64_t>& s, std::size_t r0, std::size_t c0,
                 std::size_t r1, std::size_t c1) {
    return s[r1 * sw + c1] - s[r0 * sw + c1] - s[r1 * sw + c0] + s[r0 * sw + c0];
  };

  const auto radius = static_cast<std::size_t>(window_radius);
  std::vector<double> values(w * h);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t r0 = r >= radius ? r - radius : 0;
    const std::size_t r1 = std::min(h, r + radius + 1);
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t c0 = c >= radius ? c - radius : 0;
      const std::size_t c1 = std::min(w, c + radius + 1);
      const auto n = static_cast<std::int64_t>((r1 - r0) * (c1 - c0));
      const std::int64_t sum = box(s1, r0, c0, r1, c1);
      const std::int64_t sum_sq = box(s2, r0, c0, r1, c1);
      // (n*sum_sq - sum^2) / n^2 evaluated with a single rounding.
      values[r * w + c] =
          static_cast<double>(n * sum_sq - sum * sum) / static_cast<double>(n * n);
    }
  }
  return VarianceMap(w, h, window_radius, std::move(values));
}

EmbeddingPlan plan_from_variance(const VarianceMap& vmap, std::size_t channels, std::size_t n_bits) {
  const std::size_t n_pixels = vmap.width() * vmap.height();
  if (n_bits > n_pixels * channels) {
    throw CapacityError("payload of " + std::to_string(n_bits) + " bits exceeds capacity of " +
                        std::to_string(n_pixels * channels));
  }
  const std::size_t pixels_needed = (n_bits + channels - 1) / channels;

  std::vector<std::uint32_t> order(n_pixels);
  std::iota(order.begin(), order.end(), 0u);
  const auto& v = vmap.values();
  // Pixel index is row-major, so comparing indices is the (row, col) tie-break.
  auto ranks_before = [&v](std::uint32_t a, std::uint32_t b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return a < b;
  };
  if (pixels_needed < n_pixels) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pixels_needed),
                     order.end(), ranks_before);
    order.resize(pixels_needed);
  }
  std::sort(order.begin(), order.end(), ranks_before);

  EmbeddingPlan plan;
  plan.slots.reserve(n_bits);
  for (std::uint32_t pixel : order) {
    for (std::size_t ch = 0; ch < channels && plan.slots.size() < n_bits; ++ch) {
      plan.slots.push_back(Slot{static_cast<std::uint32_t>(pixel / vmap.width()),
                                static_cast<std::uint32_t>(pixel % vmap.width()),
                                static_cast<std::uint8_t>(ch)});
    }
  }
  return plan;
}

EmbeddingPlan plan_embedding(const RasterImage& img, std::size_t n_bits, int window_radius) {
  if (n_bits > img.capacity()) {
    throw CapacityError("payload of " + std::to_string(n_bits) + " bits exceeds capacity of " +
                        std::to_string(img.capacity()));
  }
  return plan_from_variance(variance_map(img, window_radius), img.channels(), n_bits);
}

RasterImage embed(const RasterImage& img, const BitVector& bits, int window_radius) {
  const EmbeddingPlan plan = plan_embedding(img, bits.size(), window_radius);
  RasterImage out = img;
  for (std::size_t i = 0; i < plan.slots.size(); ++i) {
    const Slot& s = plan.slots[i];
    std::uint8_t& sample = out.at(s.row, s.col, s.channel);
    sample = static_cast<std::uint8_t>((sample & 0xFE) | (bits[i] ? 1 : 0));
  }
  return out;
}

BitVector extract(const RasterImage& stego, std::size_t n_bits, int window_radius) {
  const EmbeddingPlan plan = plan_embedding(stego, n_bits, window_radius);
  BitVector out(n_bits);
  for (std::size_t i = 0; i < plan.slots.size(); ++i) {
    const Slot& s = plan.slots[i];
    out.set(i, (stego.at(s.row, s.col, s.channel) & 1) != 0);
  }
  return out;
}

}  // namespace mcstego

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mcstego/bits.hpp"

namespace mcstego {

/// 8-bit raster, 1 (gray) or 3 (RGB) channels, row-major interleaved samples.
class RasterImage {
 public:
  RasterImage() = default;
  /// Throws ParameterError on zero dimensions or channels not in {1, 3}.
  RasterImage(std::size_t width, std::size_t height, std::size_t channels, std::uint8_t fill = 0);
  RasterImage(std::size_t width, std::size_t height, std::size_t channels,
              std::vector<std::uint8_t> samples);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t channels() const { return channels_; }
  std::size_t capacity() const { return samples_.size(); }

  std::uint8_t at(std::size_t row, std::size_t col, std::size_t ch = 0) const {
    return samples_[(row * width_ + col) * channels_ + ch];
  }
  std::uint8_t& at(std::size_t row, std::size_t col, std::size_t ch = 0) {
    return samples_[(row * width_ + col) * channels_ + ch];
  }
  std::span<const std::uint8_t> samples() const { return samples_; }
  std::span<std::uint8_t> samples() { return samples_; }

  bool same_shape(const RasterImage& other) const {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }
  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t channels_ = 0;
  std::vector<std::uint8_t> samples_;
};

/// Integer BT.601 luma, round(0.299R + 0.587G + 0.114B) with halves rounded up.
inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

/// PNG codec. Accepts 8-bit gray or RGB without alpha; anything else is a FormatError.
RasterImage decode_png(std::span<const std::uint8_t> png);
Bytes encode_png(const RasterImage& img, int compression_level = 6);

/// Binary PGM (P5) / PPM (P6), maxval 255.
RasterImage decode_pnm(std::span<const std::uint8_t> data);
Bytes encode_pnm(const RasterImage& img);

/// Dispatches on the file signature; lossy formats are rejected.
RasterImage load_image(const std::filesystem::path& path);
/// .png writes PNG, .ppm/.pgm writes PNM.
void save_image(const RasterImage& img, const std::filesystem::path& path);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

}  // namespace mcstego

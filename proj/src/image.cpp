#include "mcstego/image.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "mcstego/errors.hpp"

namespace mcstego {

RasterImage::RasterImage(std::size_t width, std::size_t height, std::size_t channels,
                         std::uint8_t fill)
    : RasterImage(width, height, channels,
                  std::vector<std::uint8_t>(width * height * channels, fill)) {}

RasterImage::RasterImage(std::size_t width, std::size_t height, std::size_t channels,
                         std::vector<std::uint8_t> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
  if (width == 0 || height == 0) throw ParameterError("image dimensions must be positive");
  if (channels != 1 && channels != 3) throw ParameterError("image must have 1 or 3 channels");
  if (samples_.size() != width * height * channels) {
    throw ParameterError("sample count does not match image dimensions");
  }
}

namespace {

struct PngReadSource {
  std::span<const std::uint8_t> data;
  std::size_t offset = 0;
};

void png_read_callback(png_structp png, png_bytep out, png_size_t len) {
  auto* src = static_cast<PngReadSource*>(png_get_io_ptr(png));
  if (src->offset + len > src->data.size()) png_error(png, "truncated PNG");
  std::memcpy(out, src->data.data() + src->offset, len);
  src->offset += len;
}

void png_write_callback(png_structp png, png_bytep in, png_size_t len) {
  auto* sink = static_cast<Bytes*>(png_get_io_ptr(png));
  sink->insert(sink->end(), in, in + len);
}

void png_flush_callback(png_structp) {}

[[noreturn]] void png_error_callback(png_structp png, png_const_charp msg) {
  auto* message = static_cast<std::string*>(png_get_error_ptr(png));
  if (message) *message = msg;
  png_longjmp(png, 1);
}

void png_warning_callback(png_structp, png_const_charp) {}

}  // namespace

// libpng reports errors through longjmp; the setjmp frames below must not
// own any C++ objects with non-trivial destructors created after setjmp.
RasterImage decode_png(std::span<const std::uint8_t> data) {
  if (data.size() < 8 || png_sig_cmp(data.data(), 0, 8) != 0) {
    throw FormatError("not a PNG file");
  }
  std::string error;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_callback, png_warning_callback);
  if (!png) throw FormatError("libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  PngReadSource source{data, 0};
  std::vector<std::uint8_t> samples;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  volatile bool bad_format = false;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("PNG decode failed: " + error);
  }
  png_set_read_fn(png, &source, png_read_callback);
  png_read_info(png, info);
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);
  if (bit_depth != 8 || (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB) ||
      png_get_valid(png, info, PNG_INFO_tRNS)) {
    bad_format = true;
  } else {
    const std::size_t channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
    samples.resize(static_cast<std::size_t>(width) * height * channels);
    rows.resize(height);
    for (png_uint_32 r = 0; r < height; ++r) {
      rows[r] = samples.data() + static_cast<std::size_t>(r) * width * channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (bad_format) {
    throw FormatError("PNG must be 8-bit grayscale or RGB without alpha");
  }
  const std::size_t channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  return RasterImage(width, height, channels, std::move(samples));
}

Bytes encode_png(const RasterImage& img, int compression_level) {
  Bytes out;
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_callback,
                                            png_warning_callback);
  if (!png) throw FormatError("libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows(img.height());
  for (std::size_t r = 0; r < img.height(); ++r) {
    rows[r] = const_cast<png_bytep>(img.samples().data() + r * img.width() * img.channels());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw FormatError("PNG encode failed: " + error);
  }
  png_set_write_fn(png, &out, png_write_callback, png_flush_callback);
  png_set_compression_level(png, compression_level);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()),
               static_cast<png_uint_32>(img.height()), 8,
               img.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

namespace {
std::size_t pnm_read_int(std::span<const std::uint8_t> data, std::size_t& pos) {
  auto is_ws = [](std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (pos < data.size()) {
    if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (is_ws(data[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  std::size_t value = 0;
  std::size_t digits = 0;
  while (pos < data.size() && data[pos] >= '0' && data[pos] <= '9') {
    value = value * 10 + (data[pos] - '0');
    if (value > (1u << 24)) throw FormatError("PNM header value too large");
    ++pos;
    ++digits;
  }
  if (digits == 0) throw FormatError("malformed PNM header");
  return value;
}
}  // namespace

RasterImage decode_pnm(std::span<const std::uint8_t> data) {
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '5' && data[1] != '6')) {
    throw FormatError("not a binary PGM/PPM file");
  }
  const std::size_t channels = data[1] == '6' ? 3 : 1;
  std::size_t pos = 2;
  const std::size_t width = pnm_read_int(data, pos);
  const std::size_t height = pnm_read_int(data, pos);
  const std::size_t maxval = pnm_read_int(data, pos);
  if (maxval != 255) throw FormatError("only maxval 255 PNM files are supported");
  ++pos;  // single whitespace before the raster
  const std::size_t n = width * height * channels;
  if (width == 0 || height == 0 || pos + n > data.size()) throw FormatError("truncated PNM");
  return RasterImage(width, height, channels,
                     std::vector<std::uint8_t>(data.begin() + static_cast<std::ptrdiff_t>(pos),
                                               data.begin() + static_cast<std::ptrdiff_t>(pos + n)));
}

Bytes encode_pnm(const RasterImage& img) {
  std::string header = (img.channels() == 3 ? "P6\n" : "P5\n") + std::to_string(img.width()) +
                       " " + std::to_string(img.height()) + "\n255\n";
  Bytes out(header.begin(), header.end());
  out.insert(out.end(), img.samples().begin(), img.samples().end());
  return out;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return Bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

RasterImage load_image(const std::filesystem::path& path) {
  const Bytes data = read_file(path);
  if (data.size() >= 8 && png_sig_cmp(data.data(), 0, 8) == 0) return decode_png(data);
  if (data.size() >= 2 && data[0] == 'P' && (data[1] == '5' || data[1] == '6')) {
    return decode_pnm(data);
  }
  if (data.size() >= 2 && data[0] == 0xFF && data[1] == 0xD8) {
    throw FormatError("JPEG input rejected: LSB payloads require a lossless format");
  }
  throw FormatError("unsupported image format: " + path.string());
}

void save_image(const RasterImage& img, const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".png") {
    write_file(path, encode_png(img));
  } else if (ext == ".ppm" || ext == ".pgm") {
    write_file(path, encode_pnm(img));
  } else {
    throw FormatError("unsupported output extension " + ext);
  }
}

}  // namespace mcstego

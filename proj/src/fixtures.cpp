#include "mcstego/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mcstego/crypto.hpp"
#include "mcstego/errors.hpp"
#include "mcstego/markov.hpp"

namespace mcstego {

std::filesystem::path fixtures_dir() {
  if (const char* env = std::getenv("STEGO_FIXTURES"); env && *env) return env;
  return MCSTEGO_DATA_DIR;
}

std::string load_corpus(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw CorpusError("corpus not found: " + path.string());
  const Bytes raw = read_file(path);
  if (raw.empty()) throw CorpusError("corpus is empty: " + path.string());
  return std::string(raw.begin(), raw.end());
}

std::string bundled_corpus() { return load_corpus(fixtures_dir() / "corpus.txt"); }

std::string attacker_corpus() { return load_corpus(fixtures_dir() / "attacker_corpus.txt"); }

namespace {

// Bilinear value noise on a (cells+1)^2 lattice of uniform values in [-1, 1].
class ValueNoise {
 public:
  ValueNoise(SplitMix64& rng, std::size_t cells) : cells_(cells), grid_((cells + 1) * (cells + 1)) {
    for (double& v : grid_) v = 2.0 * rng.next_unit() - 1.0;
  }
  // u, v in [0, 1]
  double at(double u, double v) const {
    const double x = u * static_cast<double>(cells_);
    const double y = v * static_cast<double>(cells_);
    const auto x0 = std::min(static_cast<std::size_t>(x), cells_ - 1);
    const auto y0 = std::min(static_cast<std::size_t>(y), cells_ - 1);
    const double fx = x - static_cast<double>(x0);
    const double fy = y - static_cast<double>(y0);
    const double sx = fx * fx * (3 - 2 * fx);
    const double sy = fy * fy * (3 - 2 * fy);
    auto g = [&](std::size_t i, std::size_t j) { return grid_[j * (cells_ + 1) + i]; };
    const double top = g(x0, y0) + sx * (g(x0 + 1, y0) - g(x0, y0));
    const double bottom = g(x0, y0 + 1) + sx * (g(x0 + 1, y0 + 1) - g(x0, y0 + 1));
    return top + sy * (bottom - top);
  }

 private:
  std::size_t cells_;
  std::vector<double> grid_;
};

struct Shape {
  double cx, cy, rx, ry;
  bool ellipse;
  double color[3];
  double alpha;
};

}  // namespace

RasterImage synthetic_cover(std::uint64_t seed, std::size_t width, std::size_t height,
                            std::size_t channels) {
  RasterImage img(width, height, channels);
  SplitMix64 rng(seed * 0x9E3779B97F4A7C15ull + 0x1234567ull);

  double base[2][3];
  for (auto& corner : base) {
    for (double& c : corner) c = 40.0 + 170.0 * rng.next_unit();
  }
  const double angle = 2.0 * M_PI * rng.next_unit();
  const double dx = std::cos(angle), dy = std::sin(angle);

  std::vector<Shape> shapes(3 + static_cast<std::size_t>(rng.next_unit() * 5));
  for (Shape& s : shapes) {
    s.cx = rng.next_unit();
    s.cy = rng.next_unit();
    s.rx = 0.05 + 0.25 * rng.next_unit();
    s.ry = 0.05 + 0.25 * rng.next_unit();
    s.ellipse = rng.next_unit() < 0.5;
    for (double& c : s.color) c = 255.0 * rng.next_unit();
    s.alpha = 0.4 + 0.5 * rng.next_unit();
  }

  const ValueNoise coarse(rng, 6), medium(rng, 24), fine(rng, 96);
  const double coarse_amp = 25.0 + 25.0 * rng.next_unit();
  const double medium_amp = 10.0 + 15.0 * rng.next_unit();
  const double fine_amp = 4.0 + 10.0 * rng.next_unit();
  const double grain_amp = 1.0 + 3.0 * rng.next_unit();
  double tint[3];
  for (double& t : tint) t = 0.7 + 0.6 * rng.next_unit();

  for (std::size_t r = 0; r < height; ++r) {
    const double v = (static_cast<double>(r) + 0.5) / static_cast<double>(height);
    for (std::size_t c = 0; c < width; ++c) {
      const double u = (static_cast<double>(c) + 0.5) / static_cast<double>(width);
      const double t = std::clamp(0.5 + 0.5 * ((u - 0.5) * dx + (v - 0.5) * dy) * 1.4, 0.0, 1.0);
      const double texture = coarse_amp * coarse.at(u, v) + medium_amp * medium.at(u, v) +
                             fine_amp * fine.at(u, v);
      double px[3];
      for (int k = 0; k < 3; ++k) px[k] = base[0][k] + t * (base[1][k] - base[0][k]);
      for (const Shape& s : shapes) {
        const double nx = (u - s.cx) / s.rx, ny = (v - s.cy) / s.ry;
        const bool inside = s.ellipse ? nx * nx + ny * ny <= 1.0 : std::abs(nx) <= 1 && std::abs(ny) <= 1;
        if (!inside) continue;
        for (int k = 0; k < 3; ++k) px[k] += s.alpha * (s.color[k] - px[k]);
      }
      for (std::size_t k = 0; k < channels; ++k) {
        const double grain = grain_amp * (2.0 * rng.next_unit() - 1.0);
        const double value = channels == 1 ? 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2] : px[k];
        const double tinted = value + texture * (channels == 1 ? 1.0 : tint[k]) + grain;
        img.at(r, c, k) = static_cast<std::uint8_t>(std::clamp(std::lround(tinted), 0L, 255L));
      }
    }
  }
  return img;
}

std::vector<RasterImage> cover_library(std::size_t count, std::uint64_t first_seed,
                                       std::size_t width, std::size_t height) {
  std::vector<RasterImage> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(synthetic_cover(first_seed + i, width, height));
  return out;
}

std::string file_checksum(const std::filesystem::path& path) { return to_hex(sha256(read_file(path))); }

}  // namespace mcstego

#include "mcstego/metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>

#include "mcstego/errors.hpp"
#include "mcstego/markov.hpp"

namespace mcstego {

double ber(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw ParameterError("ber: length mismatch");
  if (a.empty()) throw ParameterError("ber: empty input");
  return static_cast<double>((a ^ b).count()) / static_cast<double>(a.size());
}

std::optional<double> pearson(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw ParameterError("pearson: length mismatch");
  if (a.size() < 2) throw ParameterError("pearson: need at least two samples");
  const auto n = static_cast<double>(a.size());
  double sa = 0, sb = 0, sab = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    sab += a[i] && b[i];
  }
  // Bits are 0/1, so sum of squares equals the sum.
  const double cov = sab - sa * sb / n;
  const double va = sa - sa * sa / n;
  const double vb = sb - sb * sb / n;
  if (va <= 0.0 || vb <= 0.0) return std::nullopt;
  return cov / std::sqrt(va * vb);
}

double mse(const RasterImage& ref, const RasterImage& test) {
  if (!ref.same_shape(test)) throw ParameterError("image dimensions differ");
  auto a = ref.samples();
  auto b = test.samples();
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    sum += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(sum) / static_cast<double>(a.size());
}

double psnr(const RasterImage& ref, const RasterImage& test, double clamp_db) {
  const double m = mse(ref, test);
  if (m == 0.0) return clamp_db;
  return 20.0 * std::log10(255.0 / std::sqrt(m));
}

namespace {

std::vector<double> luminance_plane(const RasterImage& img) {
  std::vector<double> out(img.width() * img.height());
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      out[r * img.width() + c] =
          img.channels() == 1
              ? img.at(r, c)
              : 0.299 * img.at(r, c, 0) + 0.587 * img.at(r, c, 1) + 0.114 * img.at(r, c, 2);
    }
  }
  return out;
}

struct SsimParts {
  double ssim = 0.0;
  double contrast_structure = 0.0;
};

SsimParts ssim_parts(const RasterImage& ref, const RasterImage& test) {
  constexpr std::size_t kWin = 8;
  constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
  constexpr double kC2 = (0.03 * 255) * (0.03 * 255);
  if (!ref.same_shape(test)) throw ParameterError("image dimensions differ");
  if (ref.width() < kWin || ref.height() < kWin) {
    throw ParameterError("SSIM needs images of at least 8x8");
  }
  const std::size_t w = ref.width(), h = ref.height();
  const auto x = luminance_plane(ref);
  const auto y = luminance_plane(test);

  // Summed-area tables for x, y, x^2, y^2, xy.
  const std::size_t sw = w + 1;
  std::array<std::vector<double>, 5> sat;
  for (auto& t : sat) t.assign(sw * (h + 1), 0.0);
  for (std::size_t r = 0; r < h; ++r) {
    std::array<double, 5> row{};
    for (std::size_t c = 0; c < w; ++c) {
      const double a = x[r * w + c], b = y[r * w + c];
      const std::array<double, 5> v{a, b, a * a, b * b, a * b};
      for (int k = 0; k < 5; ++k) {
        row[k] += v[k];
        sat[k][(r + 1) * sw + c + 1] = sat[k][r * sw + c + 1] + row[k];
      }
    }
  }
  auto box = [&](int k, std::size_t r, std::size_t c) {
    const auto& s = sat[k];
    return s[(r + kWin) * sw + c + kWin] - s[r * sw + c + kWin] - s[(r + kWin) * sw + c] +
           s[r * sw + c];
  };

  constexpr double n = kWin * kWin;
  double total = 0.0, total_cs = 0.0;
  std::size_t windows = 0;
  for (std::size_t r = 0; r + kWin <= h; ++r) {
    for (std::size_t c = 0; c + kWin <= w; ++c) {
      const double mx = box(0, r, c) / n;
      const double my = box(1, r, c) / n;
      // Sample (n-1) normalization, as in the reference SSIM implementation.
      const double vx = std::max(0.0, (box(2, r, c) - n * mx * mx) / (n - 1));
      const double vy = std::max(0.0, (box(3, r, c) - n * my * my) / (n - 1));
      const double cxy = (box(4, r, c) - n * mx * my) / (n - 1);
      const double lum = (2 * mx * my + kC1) / (mx * mx + my * my + kC1);
      const double cs = (2 * cxy + kC2) / (vx + vy + kC2);
      total += lum * cs;
      total_cs += cs;
      ++windows;
    }
  }
  return {total / static_cast<double>(windows), total_cs / static_cast<double>(windows)};
}

}  // namespace

double ssim(const RasterImage& ref, const RasterImage& test) {
  if (ref == test) {
    ssim_parts(ref, test);  // still validates the shape
    return 1.0;
  }
  return ssim_parts(ref, test).ssim;
}

double ssim_contrast_structure(const RasterImage& ref, const RasterImage& test) {
  return ssim_parts(ref, test).contrast_structure;
}

double shannon_entropy(std::string_view text) {
  if (text.empty()) throw ParameterError("entropy of empty text");
  std::array<std::size_t, 256> freq{};
  for (unsigned char c : text) ++freq[c];
  const auto n = static_cast<double>(text.size());
  double h = 0.0;
  for (std::size_t f : freq) {
    if (f == 0) continue;
    const double p = static_cast<double>(f) / n;
    h -= p * std::log2(p);
  }
  return h;
}

int count_syllables(std::string_view word) {
  std::string letters;
  for (unsigned char c : word) {
    if (std::isalpha(c)) letters.push_back(static_cast<char>(std::tolower(c)));
  }
  auto is_vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  int count = 0;
  bool in_run = false;
  for (char c : letters) {
    const bool v = is_vowel(c);
    if (v && !in_run) ++count;
    in_run = v;
  }
  if (!letters.empty() && letters.back() == 'e') --count;
  return count < 1 ? 1 : count;
}

TextCounts text_counts(std::string_view text) {
  TextCounts counts;
  for (const auto& token : tokenize(text)) {
    ++counts.words;
    counts.syllables += static_cast<std::size_t>(count_syllables(token));
    const char last = token.back();
    if (last == '.' || last == '!' || last == '?') ++counts.sentences;
  }
  if (counts.words == 0) throw ParameterError("readability of empty text");
  // Text without terminal punctuation counts as one sentence.
  if (counts.sentences == 0) counts.sentences = 1;
  return counts;
}

double flesch_reading_ease(std::string_view text) {
  const TextCounts c = text_counts(text);
  const double wps = static_cast<double>(c.words) / static_cast<double>(c.sentences);
  const double spw = static_cast<double>(c.syllables) / static_cast<double>(c.words);
  return 206.835 - 1.015 * wps - 84.6 * spw;
}

double flesch_kincaid_grade(std::string_view text) {
  const TextCounts c = text_counts(text);
  const double wps = static_cast<double>(c.words) / static_cast<double>(c.sentences);
  const double spw = static_cast<double>(c.syllables) / static_cast<double>(c.words);
  return 0.39 * wps + 11.8 * spw - 15.59;
}

double success_rate(std::span<const bool> flags) {
  if (flags.empty()) throw ParameterError("success rate of no trials");
  const auto hits = std::count(flags.begin(), flags.end(), true);
  return static_cast<double>(hits) / static_cast<double>(flags.size());
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  out.n = values.size();
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(out.n);
  if (out.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(out.n - 1));
  }
  return out;
}

ExtractionReport compare_bits(const BitVector& recovered, const BitVector& truth) {
  ExtractionReport r;
  r.ber = ber(recovered, truth);
  if (truth.size() > 1) r.correlation = pearson(recovered, truth);
  r.success = recovered == truth;
  return r;
}

}  // namespace mcstego

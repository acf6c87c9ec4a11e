#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcstego/bits.hpp"
#include "mcstego/image.hpp"

namespace mcstego {

inline constexpr double kPsnrClampDb = 110.0;

/// Fraction of differing bits. Throws ParameterError on empty or mismatched input.
double ber(const BitVector& a, const BitVector& b);

/// Sample Pearson coefficient of the bits as 0/1 reals; nullopt when either
/// vector is constant.
std::optional<double> pearson(const BitVector& a, const BitVector& b);

double mse(const RasterImage& ref, const RasterImage& test);
/// 20 log10(255 / sqrt(MSE)) over all samples; clamp_db when MSE is zero.
double psnr(const RasterImage& ref, const RasterImage& test, double clamp_db = kPsnrClampDb);

/// Mean SSIM over all 8x8 windows (stride 1) of the luminance planes,
/// uniform weights, C1 = (0.01*255)^2, C2 = (0.03*255)^2.
double ssim(const RasterImage& ref, const RasterImage& test);
/// Mean of the contrast-structure factor alone (the luminance term dropped).
double ssim_contrast_structure(const RasterImage& ref, const RasterImage& test);

/// Per-character Shannon entropy in bits over the exact octets of text.
double shannon_entropy(std::string_view text);

/// Vowel-group syllable heuristic: maximal runs of [aeiouy], minus one for a
/// trailing 'e', at least one per word.
int count_syllables(std::string_view word);

struct TextCounts {
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
};
TextCounts text_counts(std::string_view text);

double flesch_reading_ease(std::string_view text);
/// Flesch-Kincaid grade level, used as the grammar-level index.
double flesch_kincaid_grade(std::string_view text);

double success_rate(std::span<const bool> flags);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n-1); 0 for n < 2
  std::size_t n = 0;
};
MeanStd mean_std(std::span<const double> values);

/// One extraction trial.
struct ExtractionReport {
  double ber = 0.0;
  std::optional<double> correlation;
  double psnr_db = 0.0;
  double ssim = 0.0;
  bool success = false;
  double latency_s = 0.0;
};

/// BER, correlation and exact-match success of recovered against truth.
ExtractionReport compare_bits(const BitVector& recovered, const BitVector& truth);

}  // namespace mcstego

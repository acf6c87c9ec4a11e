#pragma once

// Report files: CSV rows with the run manifest as '#' comment lines, a JSON
// summary of means and standard deviations, and a small SVG line plot.

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcstego/metrics.hpp"

namespace mcstego {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct RunManifest {
  std::string command_line;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<std::uint64_t> seeds;
  std::map<std::string, std::string> fixture_checksums;  // name -> sha256 hex
  std::string tool_version{kToolVersion};

  nlohmann::ordered_json to_json() const;
};

struct TrialRow {
  std::string method;
  std::size_t payload_bits = 0;
  ExtractionReport report;
};

inline constexpr std::string_view kCsvHeader = "method,payload_bits,ber,corr,psnr_db,ssim,success,latency_s";

/// "# manifest: {json}" line, header, one row per trial. Undefined
/// correlation renders as "n/a".
std::string render_csv(const RunManifest& manifest, std::span<const TrialRow> rows);

/// Manifest plus mean/std of every column per (method, payload_bits) group,
/// groups in first-appearance order.
nlohmann::ordered_json summary_json(const RunManifest& manifest, std::span<const TrialRow> rows);

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};
std::string render_svg_plot(const std::string& title, const std::string& x_label,
                            const std::string& y_label, std::span<const PlotSeries> series);

}  // namespace mcstego

#include "mcstego/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mcstego/errors.hpp"

namespace mcstego {

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool_version"] = tool_version;
  j["command_line"] = command_line;
  j["config"] = config;
  j["seeds"] = seeds;
  nlohmann::ordered_json sums = nlohmann::ordered_json::object();
  for (const auto& [name, sum] : fixture_checksums) sums[name] = sum;
  j["fixture_checksums"] = sums;
  return j;
}

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

nlohmann::ordered_json stat(std::span<const double> values) {
  const MeanStd s = mean_std(values);
  nlohmann::ordered_json j;
  j["mean"] = s.mean;
  j["std"] = s.stddev;
  j["n"] = s.n;
  return j;
}

}  // namespace

std::string render_csv(const RunManifest& manifest, std::span<const TrialRow> rows) {
  std::ostringstream out;
  out << "# manifest: " << manifest.to_json().dump() << '\n';
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << row.method << ',' << row.payload_bits << ',' << fixed(r.ber) << ','
        << (r.correlation ? fixed(*r.correlation) : std::string("n/a")) << ',' << fixed(r.psnr_db, 4)
        << ',' << fixed(r.ssim) << ',' << (r.success ? 1 : 0) << ',' << fixed(r.latency_s) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json summary_json(const RunManifest& manifest, std::span<const TrialRow> rows) {
  std::vector<std::pair<std::string, std::size_t>> keys;
  std::map<std::pair<std::string, std::size_t>, std::vector<const TrialRow*>> groups;
  for (const auto& row : rows) {
    auto key = std::make_pair(row.method, row.payload_bits);
    if (!groups.count(key)) keys.push_back(key);
    groups[key].push_back(&row);
  }
  nlohmann::ordered_json j;
  j["manifest"] = manifest.to_json();
  j["groups"] = nlohmann::ordered_json::array();
  for (const auto& key : keys) {
    std::vector<double> ber_v, corr_v, psnr_v, ssim_v, lat_v;
    std::size_t ok = 0, undefined = 0;
    for (const TrialRow* row : groups[key]) {
      ber_v.push_back(row->report.ber);
      if (row->report.correlation) {
        corr_v.push_back(*row->report.correlation);
      } else {
        ++undefined;
      }
      psnr_v.push_back(row->report.psnr_db);
      ssim_v.push_back(row->report.ssim);
      lat_v.push_back(row->report.latency_s);
      ok += row->report.success ? 1 : 0;
    }
    nlohmann::ordered_json g;
    g["method"] = key.first;
    g["payload_bits"] = key.second;
    g["trials"] = groups[key].size();
    g["ber"] = stat(ber_v);
    g["corr"] = stat(corr_v);
    g["corr_undefined"] = undefined;
    g["psnr_db"] = stat(psnr_v);
    g["ssim"] = stat(ssim_v);
    g["success_rate"] = static_cast<double>(ok) / static_cast<double>(groups[key].size());
    g["latency_s"] = stat(lat_v);
    j["groups"].push_back(g);
  }
  return j;
}

std::string render_svg_plot(const std::string& title, const std::string& x_label,
                            const std::string& y_label, std::span<const PlotSeries> series) {
  constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) throw ParameterError("plot has no points");
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) {
    ymin -= 1;
    ymax += 1;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0, yv = ymin + (ymax - ymin) * i / 4.0;
    svg << "<text x=\"" << px(xv) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << fixed(xv, 0)
        << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << fixed(yv, 2)
        << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  svg << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << y_label
      << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    auto pts = series[i].points;
    std::sort(pts.begin(), pts.end());
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (auto [x, y] : pts) svg << px(x) << ',' << py(y) << ' ';
    svg << "\"/>\n";
    for (auto [x, y] : pts) {
      svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kTop + 16.0 * static_cast<double>(i);
    svg << "<rect x=\"" << kLeft + pw + 12 << "\" y=\"" << ly << "\" width=\"10\" height=\"10\" fill=\"" << color
        << "\"/>\n";
    svg << "<text x=\"" << kLeft + pw + 28 << "\" y=\"" << ly + 9 << "\">" << series[i].label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mcstego

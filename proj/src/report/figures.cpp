// Copyright 2026 The petcarbon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "petcarbon/report/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "petcarbon/common/error.hpp"

namespace petcarbon::report {

namespace {

constexpr double kLeft = 90, kRight = 30, kTop = 50, kPlotHeight = 300, kBottom = 70;
constexpr double kGroupWidth = 120, kBarWidth = 36;
constexpr const char* kPrivateColor = "#d95f02";
constexpr const char* kBaselineColor = "#1b9e77";

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Maps a value to a height fraction in [0, 1].
struct Axis {
  bool log = false;
  double lo = 0, hi = 1;  // log: decade exponents
  std::vector<double> ticks;

  double fraction(double v) const {
    if (v <= 0) return 0;
    if (log) return std::clamp((std::log10(v) - lo) / (hi - lo), 0.0, 1.0);
    return std::clamp(v / hi, 0.0, 1.0);
  }
};

Axis make_axis(const std::vector<double>& values) {
  Axis a;
  std::vector<double> pos;
  for (double v : values) {
    if (v > 0) pos.push_back(v);
  }
  if (pos.empty()) {
    a.ticks = {0, 1};
    return a;
  }
  const double mn = *std::min_element(pos.begin(), pos.end());
  const double mx = *std::max_element(pos.begin(), pos.end());
  a.log = use_log_axis(values);
  if (a.log) {
    a.lo = std::floor(std::log10(mn));
    a.hi = std::ceil(std::log10(mx));
    if (a.hi <= a.lo) a.hi = a.lo + 1;
    for (double e = a.lo; e <= a.hi; e += 1) a.ticks.push_back(std::pow(10.0, e));
  } else {
    const double raw = mx / 5;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double step = raw / mag <= 1 ? mag : raw / mag <= 2 ? 2 * mag : raw / mag <= 5 ? 5 * mag
                                                                                      : 10 * mag;
    a.hi = std::ceil(mx / step) * step;
    for (int i = 0; i * step <= a.hi * (1 + 1e-9); ++i) a.ticks.push_back(i * step);
  }
  return a;
}

}  // namespace

bool use_log_axis(std::span<const double> values) {
  double mn = 0, mx = 0;
  bool any = false;
  for (double v : values) {
    if (!(v > 0)) continue;
    mn = any ? std::min(mn, v) : v;
    mx = any ? std::max(mx, v) : v;
    any = true;
  }
  return any && mx / mn > 100;
}

std::string render_bar_chart(const std::string& title, const std::string& unit,
                             const std::vector<BarGroup>& groups) {
  std::vector<double> values;
  for (const auto& g : groups) {
    values.push_back(g.private_value);
    if (g.baseline_value >= 0) values.push_back(g.baseline_value);
  }
  const Axis axis = make_axis(values);
  const double width = kLeft + kRight + kGroupWidth * static_cast<double>(groups.size());
  const double height = kTop + kPlotHeight + kBottom;
  const double base_y = kTop + kPlotHeight;

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", width) +
       "\" height=\"" + fmt("%.0f", height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt("%.1f", width / 2) + "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">" +
       escape(title) + "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt("%.1f", kTop + kPlotHeight / 2) +
       "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + fmt("%.1f", kTop + kPlotHeight / 2) +
       ")\">" + escape(unit) + (axis.log ? " (log scale)" : "") + "</text>\n";

  for (double t : axis.ticks) {
    const double y = base_y - axis.fraction(t) * kPlotHeight;
    s += "<line x1=\"" + fmt("%.1f", kLeft) + "\" x2=\"" + fmt("%.1f", width - kRight) + "\" y1=\"" +
         fmt("%.1f", y) + "\" y2=\"" + fmt("%.1f", y) + "\" stroke=\"#dddddd\"/>\n";
    s += "<text x=\"" + fmt("%.1f", kLeft - 6) + "\" y=\"" + fmt("%.1f", y + 4) +
         "\" text-anchor=\"end\">" + fmt("%.3g", t) + "</text>\n";
  }
  s += "<line x1=\"" + fmt("%.1f", kLeft) + "\" x2=\"" + fmt("%.1f", kLeft) + "\" y1=\"" +
       fmt("%.1f", kTop) + "\" y2=\"" + fmt("%.1f", base_y) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fmt("%.1f", kLeft) + "\" x2=\"" + fmt("%.1f", width - kRight) + "\" y1=\"" +
       fmt("%.1f", base_y) + "\" y2=\"" + fmt("%.1f", base_y) + "\" stroke=\"black\"/>\n";

  auto bar = [&](double x, double v, const char* color) {
    const double h = axis.fraction(v) * kPlotHeight;
    s += "<rect x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", base_y - h) + "\" width=\"" +
         fmt("%.1f", kBarWidth) + "\" height=\"" + fmt("%.1f", h) + "\" fill=\"" + color +
         "\"><title>" + fmt("%.6g", v) + "</title></rect>\n";
  };
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double gx = kLeft + kGroupWidth * static_cast<double>(i);
    const double cx = gx + kGroupWidth / 2;
    bar(cx - kBarWidth - 2, groups[i].private_value, kPrivateColor);
    if (groups[i].baseline_value >= 0) bar(cx + 2, groups[i].baseline_value, kBaselineColor);
    s += "<text x=\"" + fmt("%.1f", cx) + "\" y=\"" + fmt("%.1f", base_y + 16) +
         "\" text-anchor=\"middle\">" + escape(groups[i].label) + "</text>\n";
  }

  const double ly = height - 22;
  s += "<rect x=\"" + fmt("%.1f", kLeft) + "\" y=\"" + fmt("%.1f", ly - 9) +
       "\" width=\"10\" height=\"10\" fill=\"" + kPrivateColor + "\"/>\n";
  s += "<text x=\"" + fmt("%.1f", kLeft + 14) + "\" y=\"" + fmt("%.1f", ly) + "\">private</text>\n";
  s += "<rect x=\"" + fmt("%.1f", kLeft + 80) + "\" y=\"" + fmt("%.1f", ly - 9) +
       "\" width=\"10\" height=\"10\" fill=\"" + kBaselineColor + "\"/>\n";
  s += "<text x=\"" + fmt("%.1f", kLeft + 94) + "\" y=\"" + fmt("%.1f", ly) + "\">plaintext</text>\n";
  s += "</svg>\n";
  return s;
}

std::vector<std::filesystem::path> emit_figures(const BenchmarkReport& report,
                                                const std::filesystem::path& dir) {
  if (report.empty()) throw Error(ErrorCode::kInvalidArgument, "report has no results to plot");
  std::vector<BarGroup> energy, carbon;
  for (const auto& p : report.results) {
    energy.push_back({p.workload, p.private_stats.mean_kwh, p.baseline_stats.mean_kwh});
    carbon.push_back({p.workload, p.private_emissions_g, p.baseline_emissions_g});
  }
  for (const auto& e : report.external) {
    energy.push_back({e.workload, e.result.stats.mean_kwh, -1});
    carbon.push_back({e.workload, e.result.mean_emissions_g, -1});
  }
  std::string country;
  if (!report.results.empty()) {
    country = report.results.front().intensity.country;
  } else {
    country = report.external.front().result.intensity.country;
  }

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::vector<std::pair<std::filesystem::path, std::string>> files{
      {dir / "energy.svg", render_bar_chart("Average energy consumption per run", "kWh", energy)},
      {dir / "emissions.svg",
       render_bar_chart("Average carbon emissions per run (" + country + ")", "g CO2eq", carbon)}};
  std::vector<std::filesystem::path> out;
  for (const auto& [path, body] : files) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
    f << body;
    f.close();
    if (!f) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
    out.push_back(path);
  }
  return out;
}

}  // namespace petcarbon::report

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

#include "petcarbon/carbon/intensity.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "petcarbon/common/error.hpp"

namespace petcarbon::carbon {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_row(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::kInvalidArgument,
              "intensity table line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

IntensityTable IntensityTable::parse_csv(std::string_view text) {
  // Tolerate a UTF-8 byte-order mark.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  IntensityTable table;
  std::set<std::pair<std::string, int>> seen;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "country,year,g_per_kwh") {
        bad_row(line_no, "expected header 'country,year,g_per_kwh'");
      }
      header_seen = true;
      continue;
    }
    const auto cols = split_commas(line);
    if (cols.size() != 3) bad_row(line_no, "expected 3 columns");
    CarbonIntensity row;
    row.country = std::string(cols[0]);
    if (row.country.size() != 2 ||
        !std::all_of(row.country.begin(), row.country.end(),
                     [](char c) { return c >= 'A' && c <= 'Z'; })) {
      bad_row(line_no, "country must be an upper-case ISO-3166 alpha-2 code");
    }
    auto [p1, e1] = std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), row.year);
    if (e1 != std::errc{} || p1 != cols[1].data() + cols[1].size()) {
      bad_row(line_no, "bad year");
    }
    try {
      std::size_t used = 0;
      row.g_per_kwh = std::stod(std::string(cols[2]), &used);
      if (used != cols[2].size()) bad_row(line_no, "bad g_per_kwh");
    } catch (const std::logic_error&) {
      bad_row(line_no, "bad g_per_kwh");
    }
    if (!(row.g_per_kwh > 0)) bad_row(line_no, "g_per_kwh must be positive");
    if (!seen.emplace(row.country, row.year).second) {
      bad_row(line_no, "duplicate (country, year)");
    }
    table.rows_.push_back(std::move(row));
  }
  if (!header_seen) throw Error(ErrorCode::kInvalidArgument, "intensity table is empty");
  return table;
}

IntensityTable IntensityTable::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

const IntensityTable& IntensityTable::builtin() {
  static const IntensityTable table = parse_csv(builtin_intensity_csv());
  return table;
}

const CarbonIntensity& IntensityTable::lookup(std::string_view country,
                                              std::optional<int> year) const {
  const CarbonIntensity* best = nullptr;
  for (const auto& row : rows_) {
    if (row.country != country) continue;
    if (year) {
      if (row.year == *year) return row;
    } else if (best == nullptr || row.year > best->year) {
      best = &row;
    }
  }
  if (best == nullptr) {
    std::string what = "no carbon intensity for '" + std::string(country) + "'";
    if (year) what += " in " + std::to_string(*year);
    throw Error(ErrorCode::kUnknownCountry, what);
  }
  return *best;
}

EmissionsReport make_emissions_report(double energy_kwh, const CarbonIntensity& intensity) {
  if (energy_kwh < 0) {
    throw Error(ErrorCode::kInvalidArgument, "energy must be non-negative");
  }
  return EmissionsReport{energy_kwh, intensity.country, intensity,
                         emissions(energy_kwh, intensity)};
}

}  // namespace petcarbon::carbon

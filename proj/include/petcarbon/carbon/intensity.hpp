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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace petcarbon::carbon {

inline constexpr std::string_view kDefaultCountry = "NL";

struct CarbonIntensity {
  std::string country;  // ISO-3166 alpha-2
  double g_per_kwh = 0;
  int year = 0;

  friend bool operator==(const CarbonIntensity&, const CarbonIntensity&) = default;
};

struct EmissionsReport {
  double energy_kwh = 0;
  std::string country;
  CarbonIntensity intensity;
  double emissions_g = 0;
};

/// Immutable (country, year) -> g CO2eq/kWh table.
class IntensityTable {
 public:
  /// Parses `country,year,g_per_kwh` CSV text (header required).
  static IntensityTable parse_csv(std::string_view text);
  static IntensityTable load_csv(const std::filesystem::path& path);
  /// The table compiled into the binary from data/carbon_intensity.csv.
  static const IntensityTable& builtin();

  /// Exact (country, year) row, or the latest year for the country when
  /// `year` is empty. Throws UnknownCountry.
  const CarbonIntensity& lookup(std::string_view country,
                                std::optional<int> year = std::nullopt) const;

  const std::vector<CarbonIntensity>& rows() const { return rows_; }

 private:
  std::vector<CarbonIntensity> rows_;
};

std::string_view builtin_intensity_csv();

inline double emissions(double energy_kwh, const CarbonIntensity& intensity) {
  return energy_kwh * intensity.g_per_kwh;
}

EmissionsReport make_emissions_report(double energy_kwh, const CarbonIntensity& intensity);

}  // namespace petcarbon::carbon

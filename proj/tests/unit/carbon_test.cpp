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

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "petcarbon/carbon/intensity.hpp"
#include "petcarbon/common/error.hpp"

namespace petcarbon::carbon {
namespace {

TEST(IntensityTable, ReferenceCountries2023) {
  const auto& t = IntensityTable::builtin();
  EXPECT_EQ(t.lookup("NL", 2023).g_per_kwh, 268);
  EXPECT_EQ(t.lookup("FR", 2023).g_per_kwh, 56);
  EXPECT_EQ(t.lookup("PL", 2023).g_per_kwh, 662);
}

TEST(IntensityTable, BuiltinMatchesShippedDataFile) {
  std::ifstream in(std::string(PETCARBON_DATA_DIR) + "/carbon_intensity.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), builtin_intensity_csv());
}

TEST(IntensityTable, DefaultsToLatestYear) {
  const auto t = IntensityTable::parse_csv(
      "country,year,g_per_kwh\nNL,2021,390\nNL,2023,268\nNL,2022,330\n");
  EXPECT_EQ(t.lookup("NL").year, 2023);
  EXPECT_EQ(t.lookup("NL", 2021).g_per_kwh, 390);
}

TEST(IntensityTable, UnknownCountryOrYear) {
  const auto& t = IntensityTable::builtin();
  try {
    t.lookup("XX");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownCountry);
  }
  try {
    t.lookup("NL", 1900);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownCountry);
  }
}

TEST(IntensityTable, RejectsMalformedFiles) {
  for (const char* bad : {
           "",
           "country,g_per_kwh,year\nNL,268,2023\n",
           "country,year,g_per_kwh\nNL,2023\n",
           "country,year,g_per_kwh\nNL,2023,0\n",
           "country,year,g_per_kwh\nNL,2023,-3\n",
           "country,year,g_per_kwh\nnl,2023,268\n",
           "country,year,g_per_kwh\nNL,20x3,268\n",
           "country,year,g_per_kwh\nNL,2023,268\nNL,2023,270\n",
       }) {
    EXPECT_THROW(IntensityTable::parse_csv(bad), Error) << bad;
  }
}

TEST(IntensityTable, AcceptsBomAndCrlf) {
  const auto t = IntensityTable::parse_csv("\xEF\xBB\xBF" "country,year,g_per_kwh\r\nFR,2023,56\r\n");
  EXPECT_EQ(t.lookup("FR").g_per_kwh, 56);
}

TEST(Emissions, ZeroEnergyIsZeroGrams) {
  for (const auto& row : IntensityTable::builtin().rows()) EXPECT_EQ(emissions(0, row), 0);
}

TEST(Emissions, ReferenceProducts) {
  const auto& t = IntensityTable::builtin();
  EXPECT_EQ(emissions(1.0, t.lookup("NL")), 268);
  EXPECT_EQ(emissions(0.5, t.lookup("PL")), 331);
  const auto r = make_emissions_report(0.5, t.lookup("PL"));
  EXPECT_EQ(r.country, "PL");
  EXPECT_EQ(r.emissions_g, 331);
  EXPECT_THROW(make_emissions_report(-1, t.lookup("PL")), Error);
}

TEST(Emissions, ProportionalAndRatiosCountryInvariant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> energy(1e-9, 10.0);
  const auto& rows = IntensityTable::builtin().rows();
  for (int i = 0; i < 1000; ++i) {
    const double a = energy(rng), b = energy(rng);
    for (const auto& row : rows) {
      const double ea = emissions(a, row), eb = emissions(b, row);
      ASSERT_NEAR(ea / a, row.g_per_kwh, 1e-12 * row.g_per_kwh);
      ASSERT_NEAR(ea / eb, a / b, 1e-12 * (a / b));
    }
  }
}

}  // namespace
}  // namespace petcarbon::carbon

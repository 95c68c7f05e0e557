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
#include <span>
#include <string>
#include <vector>

#include "petcarbon/report/report.hpp"

namespace petcarbon::report {

/// Log axis once the largest bar is more than 100x the smallest positive one.
bool use_log_axis(std::span<const double> values);

struct BarGroup {
  std::string label;
  double private_value = 0;
  double baseline_value = 0;  // negative: no baseline bar
};

/// Grouped bar chart as a standalone SVG document. Deterministic.
std::string render_bar_chart(const std::string& title, const std::string& unit,
                             const std::vector<BarGroup>& groups);

/// energy.svg (mean kWh per run) and emissions.svg (mean g CO2eq per run),
/// one group per workload. InvalidArgument for an empty report, IoError when
/// a file cannot be written. Returns the paths written.
std::vector<std::filesystem::path> emit_figures(const BenchmarkReport& report,
                                                const std::filesystem::path& dir);

}  // namespace petcarbon::report

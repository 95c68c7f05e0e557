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
#include <string>
#include <string_view>
#include <vector>

#include "petcarbon/harness/external.hpp"
#include "petcarbon/harness/runner.hpp"
#include "petcarbon/report/config.hpp"

namespace petcarbon::report {

struct HostDescriptor {
  std::string cpu_model;
  unsigned logical_cpus = 0;
  double ram_gb = 0;
  std::string os;
  std::string meter_backend;
  bool operator==(const HostDescriptor&) const = default;
};

/// Reads /proc/cpuinfo, /proc/meminfo and uname. Missing fields stay
/// "unknown" / 0.
HostDescriptor detect_host(std::string_view meter_backend);

struct ExternalEntry {
  std::string workload;
  std::string command;
  harness::ExternalResult result;
};

struct BenchmarkReport {
  RunConfig config;
  std::string tool_version;
  HostDescriptor host;
  std::string started_at;  // ISO 8601 UTC
  std::string finished_at;
  std::vector<harness::PairResult> results;
  std::vector<ExternalEntry> external;

  bool empty() const { return results.empty() && external.empty(); }
};

std::string utc_timestamp();

enum class ReportFormat { kJson, kCsv };

inline constexpr std::string_view kCsvHeader =
    "workload,variant,run,energy_kwh,emissions_g,runtime_s";

std::string report_to_json(const BenchmarkReport& report);
/// InvalidArgument on malformed input.
BenchmarkReport report_from_json(std::string_view text);

/// One row per measured run, numbers printed with %.17g. emissions_g is
/// energy_kwh times the row's intensity.
std::string report_to_csv(const BenchmarkReport& report);

/// Writes the report; IoError when the file cannot be written.
void emit_report(const BenchmarkReport& report, const std::filesystem::path& path,
                 ReportFormat format);

}  // namespace petcarbon::report

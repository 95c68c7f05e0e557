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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "petcarbon/report/config.hpp"
#include "petcarbon/report/report.hpp"

namespace petcarbon::report {

std::string_view tool_version();

enum class CommandKind { kRun, kIntensityList, kCorpusGenerate, kSiteGenerate, kPrint };

struct GenerateArgs {
  std::string out;
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

struct CliCommand {
  CommandKind kind = CommandKind::kPrint;
  RunConfig config;                          // kRun
  GenerateArgs generate;                     // kCorpusGenerate, kSiteGenerate
  std::optional<std::string> intensity_file; // kIntensityList
  std::string text;                          // kPrint: help or version
};

/// Arguments without the program name. UsageError for unknown flags, flags of
/// another suite and invalid values; --help yields kPrint with the help text.
CliCommand parse_cli(const std::vector<std::string>& args);

/// Runs every pair the config describes and writes the requested outputs.
/// Progress goes to log.
BenchmarkReport execute(const RunConfig& config, std::ostream& log);

/// 0 on success, 2 on usage error, 1 on runtime failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace petcarbon::report

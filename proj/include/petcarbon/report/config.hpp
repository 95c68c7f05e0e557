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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace petcarbon::report {

inline constexpr std::string_view kSuites[] = {"email", "web", "heml", "edb", "external"};

struct MeterSettings {
  std::string backend = "simulated";  // simulated | powercap
  int interval_ms = 1;
  double ram_gb = 0;
  std::string powercap_root = "/sys/class/powercap";

  bool operator==(const MeterSettings&) const = default;
};

struct EmailParams {
  std::string cipher = "all";  // rsa | ecc | elgamal | all
  std::string op = "both";     // encrypt | sign | both
  std::optional<std::string> corpus;
  bool operator==(const EmailParams&) const = default;
};

struct WebParams {
  std::optional<std::string> site;  // directory with manifest.txt
  bool keep_alive = false;
  bool operator==(const WebParams&) const = default;
};

struct HemlParams {
  std::vector<std::size_t> features{30};
  std::size_t samples = 100;
  int scale_bits = 16;
  std::vector<std::size_t> batch{1};
  std::optional<std::string> model_out;
  bool operator==(const HemlParams&) const = default;
};

struct EdbParams {
  std::optional<std::string> corpus;
  std::vector<std::size_t> db_sizes{50, 200, 1000};
  bool operator==(const EdbParams&) const = default;
};

struct ExternalParams {
  std::string cmd;
  std::string baseline_cmd;  // empty: measure cmd alone
  bool operator==(const ExternalParams&) const = default;
};

/// Everything a run depends on. Only the selected suite's params are
/// serialized.
struct RunConfig {
  std::string suite;
  std::optional<std::size_t> iterations;  // empty: suite default
  std::size_t warmup = 5;
  std::string country = "NL";
  std::optional<int> year;
  std::optional<std::string> intensity_file;
  MeterSettings meter;
  std::optional<std::string> out;
  std::optional<std::string> csv;
  std::optional<std::string> figures;
  std::uint64_t seed = 1;

  EmailParams email;
  WebParams web;
  HemlParams heml;
  EdbParams edb;
  ExternalParams external;

  bool operator==(const RunConfig&) const = default;
};

/// 1000 for web requests and edb queries, ceil(samples / batch) (at least 5)
/// for heml, 100 otherwise.
std::size_t default_iterations(const RunConfig& config, std::size_t heml_batch = 1);

/// UsageError for an unknown suite, an out-of-range value or a missing
/// required parameter.
void validate(const RunConfig& config);

std::string config_to_json(const RunConfig& config);
/// UsageError on malformed JSON, unknown keys or bad values.
RunConfig config_from_json(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace petcarbon::report

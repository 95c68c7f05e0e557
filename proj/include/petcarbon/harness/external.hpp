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

#include <string>
#include <vector>

#include "petcarbon/harness/runner.hpp"

namespace petcarbon::harness {

/// Splits a command line on whitespace, honouring single and double quotes
/// and backslash escapes. No variable expansion or globbing.
std::vector<std::string> split_command_line(const std::string& line);

/// Spawns argv per run_once and waits for it. SpawnFailure if the program
/// cannot be started, NonZeroExit if it exits non-zero or dies on a signal.
class ExternalCommandWorkload final : public Workload {
 public:
  ExternalCommandWorkload(std::string id, Variant variant, std::vector<std::string> argv,
                          Taxonomy taxonomy = {Overhead::kComputational},
                          bool quiet = true);

  std::string id() const override { return id_; }
  Variant variant() const override { return variant_; }
  Taxonomy taxonomy() const override { return taxonomy_; }
  void run_once() override;

 private:
  std::string id_;
  Variant variant_;
  std::vector<std::string> argv_;
  Taxonomy taxonomy_;
  bool quiet_;
};

struct ExternalResult {
  MeasurementStats stats;
  std::vector<RunRecord> runs;
  carbon::CarbonIntensity intensity;
  double mean_emissions_g = 0;
};

/// Measures a third-party command: each window spans child start to exit.
ExternalResult run_external(const std::vector<std::string>& argv, std::size_t iterations,
                            meter::Meter& meter, const carbon::CarbonIntensity& intensity,
                            std::size_t warmup = 0);

}  // namespace petcarbon::harness

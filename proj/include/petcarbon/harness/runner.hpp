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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "petcarbon/carbon/intensity.hpp"
#include "petcarbon/common/error.hpp"
#include "petcarbon/harness/workload.hpp"
#include "petcarbon/meter/meter.hpp"
#include "petcarbon/meter/sampler.hpp"

namespace petcarbon::harness {

inline constexpr std::size_t kDefaultWarmup = 5;

struct RunRecord {
  std::size_t run_index = 0;  // per variant
  std::size_t sequence = 0;   // position in the measured A/B order
  Variant variant = Variant::kPrivate;
  meter::EnergyBreakdown breakdown;
  double runtime_s = 0;
};

struct MeasurementStats {
  std::size_t n_runs = 0;
  double mean_kwh = 0;
  double std_kwh = 0;
  double min_kwh = 0;
  double max_kwh = 0;
  double mean_runtime_s = 0;
};

struct PairResult {
  std::string workload;
  Taxonomy taxonomy;
  carbon::CarbonIntensity intensity;
  MeasurementStats private_stats;
  MeasurementStats baseline_stats;
  /// Empty when the baseline has no measurable cost (ZeroBaseline); report
  /// absolute energies instead.
  std::optional<double> overhead_ratio;
  double private_emissions_g = 0;   // mean per run
  double baseline_emissions_g = 0;  // mean per run
  std::vector<RunRecord> runs;      // measured runs, in execution order
};

struct RunOptions {
  std::size_t iterations = 100;
  std::size_t warmup = kDefaultWarmup;
  /// Fraction dropped from each tail before computing stats; 0 keeps all.
  double trim_fraction = 0.0;
};

/// Thrown when a run_once raises. Carries the runs completed so far.
class WorkloadFailure : public Error {
 public:
  WorkloadFailure(const std::string& message, std::vector<RunRecord> partial,
                  std::optional<ErrorCode> cause = std::nullopt)
      : Error(ErrorCode::kWorkloadFailure, message),
        partial_runs_(std::move(partial)),
        cause_(cause) {}

  const std::vector<RunRecord>& partial_runs() const { return partial_runs_; }
  /// Code of the petcarbon::Error raised by run_once, if it was one.
  std::optional<ErrorCode> cause() const { return cause_; }

 private:
  std::vector<RunRecord> partial_runs_;
  std::optional<ErrorCode> cause_;
};

/// Sample mean, n-1 standard deviation (0 for one run), extrema.
MeasurementStats aggregate_stats(std::span<const RunRecord> records, double trim_fraction = 0);

/// private.mean_kwh / baseline.mean_kwh; ZeroBaseline when the baseline is 0.
double relative_overhead(const MeasurementStats& private_stats,
                         const MeasurementStats& baseline_stats);

/// Measures one run_once in its own energy window.
RunRecord measure_run(Workload& workload, meter::Meter& meter);

/// Same, reusing a launched sampler so consecutive runs share one sampling
/// thread.
RunRecord measure_run(Workload& workload, meter::Sampler& sampler, meter::Meter& meter);

/// Warmup runs (discarded) then `iterations` measured runs per variant in
/// private/baseline alternation. setup/teardown bracket the whole sequence.
PairResult run_pair(Workload& private_variant, Workload& baseline, const RunOptions& options,
                    meter::Meter& meter, const carbon::CarbonIntensity& intensity);

/// Same runs re-scored under another country's intensity. The overhead ratio
/// depends only on energies and is carried over unchanged.
PairResult rescore(const PairResult& result, const carbon::CarbonIntensity& intensity);

}  // namespace petcarbon::harness

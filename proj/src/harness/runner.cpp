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

#include "petcarbon/harness/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "petcarbon/meter/integrate.hpp"
#include "petcarbon/meter/sampler.hpp"

namespace petcarbon::harness {

std::string_view to_string(Variant v) {
  return v == Variant::kPrivate ? "PRIVATE" : "PLAINTEXT";
}

std::string_view to_string(Overhead o) {
  switch (o) {
    case Overhead::kComputational: return "COMPUTATIONAL";
    case Overhead::kCommunication: return "COMMUNICATION";
    case Overhead::kInfrastructure: return "INFRASTRUCTURE";
    case Overhead::kHardware: return "HARDWARE";
  }
  return "?";
}

Variant parse_variant(std::string_view s) {
  if (s == "PRIVATE") return Variant::kPrivate;
  if (s == "PLAINTEXT") return Variant::kPlaintext;
  throw Error(ErrorCode::kInvalidArgument, "unknown variant '" + std::string(s) + "'");
}

Overhead parse_overhead(std::string_view s) {
  for (auto o : {Overhead::kComputational, Overhead::kCommunication,
                 Overhead::kInfrastructure, Overhead::kHardware}) {
    if (to_string(o) == s) return o;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown overhead class '" + std::string(s) + "'");
}

MeasurementStats aggregate_stats(std::span<const RunRecord> records, double trim_fraction) {
  if (records.empty()) throw Error(ErrorCode::kEmptyInput, "no run records");
  if (trim_fraction < 0 || trim_fraction >= 0.5) {
    throw Error(ErrorCode::kInvalidArgument, "trim_fraction must be in [0, 0.5)");
  }
  std::vector<const RunRecord*> used;
  used.reserve(records.size());
  for (const auto& r : records) used.push_back(&r);
  if (trim_fraction > 0) {
    std::sort(used.begin(), used.end(), [](const RunRecord* a, const RunRecord* b) {
      return a->breakdown.total_kwh < b->breakdown.total_kwh;
    });
    const auto cut = static_cast<std::size_t>(std::floor(trim_fraction * used.size()));
    used = std::vector<const RunRecord*>(used.begin() + static_cast<std::ptrdiff_t>(cut),
                                         used.end() - static_cast<std::ptrdiff_t>(cut));
  }

  MeasurementStats s;
  s.n_runs = used.size();
  s.min_kwh = used.front()->breakdown.total_kwh;
  s.max_kwh = s.min_kwh;
  // Welford: one pass, stable for the tiny per-run kWh magnitudes.
  double mean = 0, m2 = 0, runtime = 0;
  std::size_t k = 0;
  for (const auto* r : used) {
    const double x = r->breakdown.total_kwh;
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
    s.min_kwh = std::min(s.min_kwh, x);
    s.max_kwh = std::max(s.max_kwh, x);
    runtime += r->runtime_s;
  }
  s.mean_kwh = std::clamp(mean, s.min_kwh, s.max_kwh);
  s.std_kwh = k > 1 ? std::sqrt(std::max(0.0, m2 / static_cast<double>(k - 1))) : 0.0;
  s.mean_runtime_s = runtime / static_cast<double>(k);
  return s;
}

double relative_overhead(const MeasurementStats& private_stats,
                         const MeasurementStats& baseline_stats) {
  if (!(baseline_stats.mean_kwh > 0)) {
    throw Error(ErrorCode::kZeroBaseline,
                "baseline has no measurable energy; report absolute cost instead");
  }
  return private_stats.mean_kwh / baseline_stats.mean_kwh;
}

RunRecord measure_run(Workload& workload, meter::Sampler& sampler, meter::Meter& meter) {
  try {
    sampler.begin_window();
  } catch (const Error& e) {
    throw Error(ErrorCode::kMeterFailure, e.what());
  }
  const auto t0 = std::chrono::steady_clock::now();
  try {
    workload.run_once();
  } catch (const std::exception& e) {
    try {
      sampler.end_window();
    } catch (...) {
    }
    std::optional<ErrorCode> cause;
    if (const auto* pe = dynamic_cast<const Error*>(&e)) cause = pe->code();
    throw WorkloadFailure(workload.id() + " [" + std::string(to_string(workload.variant())) +
                              "]: " + e.what(),
                          {}, cause);
  }
  const auto t1 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.variant = workload.variant();
  rec.runtime_s = std::chrono::duration<double>(t1 - t0).count();
  try {
    const auto samples = sampler.end_window();
    rec.breakdown = meter::integrate(samples, meter.domains());
  } catch (const Error& e) {
    throw Error(ErrorCode::kMeterFailure, e.what());
  }
  if (meter.ram_watts() > 0) meter::add_ram_domain(rec.breakdown, meter.ram_watts());
  if (!(rec.runtime_s > 0)) rec.runtime_s = 1e-9;
  return rec;
}

RunRecord measure_run(Workload& workload, meter::Meter& meter) {
  meter::Sampler sampler(meter, std::chrono::milliseconds(meter.config().interval_ms));
  try {
    sampler.launch();
  } catch (const Error& e) {
    throw Error(ErrorCode::kMeterFailure, e.what());
  }
  auto rec = measure_run(workload, sampler, meter);
  sampler.halt();
  return rec;
}

namespace {

void validate_pair(const Workload& priv, const Workload& base, const RunOptions& options) {
  if (options.iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 1");
  }
  if (priv.id() != base.id()) {
    throw Error(ErrorCode::kInvalidArgument,
                "paired workloads must share an id: '" + priv.id() + "' vs '" + base.id() + "'");
  }
  if (priv.variant() != Variant::kPrivate || base.variant() != Variant::kPlaintext) {
    throw Error(ErrorCode::kInvalidArgument, "run_pair expects (PRIVATE, PLAINTEXT)");
  }
  if (priv.taxonomy().empty()) {
    throw Error(ErrorCode::kInvalidArgument, "private workloads need a non-empty taxonomy");
  }
}

std::vector<RunRecord> of_variant(const std::vector<RunRecord>& runs, Variant v) {
  std::vector<RunRecord> out;
  for (const auto& r : runs) {
    if (r.variant == v) out.push_back(r);
  }
  return out;
}

}  // namespace

PairResult run_pair(Workload& private_variant, Workload& baseline, const RunOptions& options,
                    meter::Meter& meter, const carbon::CarbonIntensity& intensity) {
  validate_pair(private_variant, baseline, options);

  std::vector<RunRecord> runs;
  runs.reserve(options.iterations * 2);
  Workload* order[2] = {&private_variant, &baseline};

  private_variant.setup();
  try {
    baseline.setup();
  } catch (...) {
    private_variant.teardown();
    throw;
  }
  meter::Sampler sampler(meter, std::chrono::milliseconds(meter.config().interval_ms));
  try {
    try {
      sampler.launch();
    } catch (const Error& e) {
      throw Error(ErrorCode::kMeterFailure, e.what());
    }
    for (std::size_t i = 0; i < options.warmup; ++i) {
      for (auto* w : order) measure_run(*w, sampler, meter);
    }
    for (std::size_t i = 0; i < options.iterations; ++i) {
      for (auto* w : order) {
        RunRecord rec;
        try {
          rec = measure_run(*w, sampler, meter);
        } catch (const WorkloadFailure& e) {
          throw WorkloadFailure(e.what(), runs, e.cause());
        }
        rec.run_index = i;
        rec.sequence = runs.size();
        runs.push_back(std::move(rec));
      }
    }
  } catch (...) {
    if (sampler.running()) sampler.halt();
    baseline.teardown();
    private_variant.teardown();
    throw;
  }
  sampler.halt();
  baseline.teardown();
  private_variant.teardown();

  PairResult result;
  result.workload = private_variant.id();
  result.taxonomy = private_variant.taxonomy();
  result.intensity = intensity;
  const auto priv_runs = of_variant(runs, Variant::kPrivate);
  const auto base_runs = of_variant(runs, Variant::kPlaintext);
  result.private_stats = aggregate_stats(priv_runs, options.trim_fraction);
  result.baseline_stats = aggregate_stats(base_runs, options.trim_fraction);
  result.runs = std::move(runs);
  try {
    result.overhead_ratio = relative_overhead(result.private_stats, result.baseline_stats);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kZeroBaseline) throw;
    result.overhead_ratio.reset();
  }
  result.private_emissions_g = carbon::emissions(result.private_stats.mean_kwh, intensity);
  result.baseline_emissions_g = carbon::emissions(result.baseline_stats.mean_kwh, intensity);
  return result;
}

PairResult rescore(const PairResult& result, const carbon::CarbonIntensity& intensity) {
  PairResult out = result;
  out.intensity = intensity;
  out.private_emissions_g = carbon::emissions(out.private_stats.mean_kwh, intensity);
  out.baseline_emissions_g = carbon::emissions(out.baseline_stats.mean_kwh, intensity);
  return out;
}

}  // namespace petcarbon::harness

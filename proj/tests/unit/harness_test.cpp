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

#include <bit>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "petcarbon/harness/external.hpp"
#include "petcarbon/harness/runner.hpp"

namespace petcarbon::harness {
namespace {

using namespace std::chrono_literals;

constexpr double kJoulesPerKwh = 3.6e6;

meter::Meter simulated_meter(double watts = 10.0) {
  meter::MeterConfig cfg;
  cfg.simulated.trace = meter::PowerTrace::constant(watts);
  return meter::Meter::open(cfg);
}

RunRecord record_joules(double joules, double runtime = 1.0) {
  RunRecord r;
  r.breakdown.total_kwh = joules / kJoulesPerKwh;
  r.runtime_s = runtime;
  return r;
}

const carbon::CarbonIntensity& nl() { return carbon::IntensityTable::builtin().lookup("NL"); }

FunctionWorkload sleeper(Variant v, std::chrono::microseconds d) {
  return FunctionWorkload("sleep", v, {Overhead::kComputational},
                          [d] { std::this_thread::sleep_for(d); });
}

TEST(AggregateStats, TextbookMeanAndSampleStd) {
  std::vector<RunRecord> r{record_joules(1), record_joules(2), record_joules(3)};
  const auto s = aggregate_stats(r);
  EXPECT_EQ(s.n_runs, 3u);
  EXPECT_NEAR(s.mean_kwh * kJoulesPerKwh, 2.0, 1e-12);
  EXPECT_NEAR(s.std_kwh * kJoulesPerKwh, 1.0, 1e-12);
  EXPECT_NEAR(s.min_kwh * kJoulesPerKwh, 1.0, 1e-12);
  EXPECT_NEAR(s.max_kwh * kJoulesPerKwh, 3.0, 1e-12);
}

TEST(AggregateStats, SingleRunHasZeroStd) {
  std::vector<RunRecord> r{record_joules(5)};
  const auto s = aggregate_stats(r);
  EXPECT_NEAR(s.mean_kwh * kJoulesPerKwh, 5.0, 1e-12);
  EXPECT_EQ(s.std_kwh, 0.0);
}

TEST(AggregateStats, MatchesTwoPassOracle) {
  std::mt19937_64 rng(99);
  std::lognormal_distribution<double> dist(-14.0, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<RunRecord> r;
    std::vector<double> xs;
    for (int i = 0; i < 1000; ++i) {
      xs.push_back(dist(rng));
      RunRecord rec;
      rec.breakdown.total_kwh = xs.back();
      rec.runtime_s = 1;
      r.push_back(rec);
    }
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (xs.size() - 1));
    const auto s = aggregate_stats(r);
    ASSERT_NEAR(s.mean_kwh, mean, 1e-9 * mean);
    ASSERT_NEAR(s.std_kwh, sd, 1e-9 * sd);
    ASSERT_LE(s.min_kwh, s.mean_kwh);
    ASSERT_LE(s.mean_kwh, s.max_kwh);
  }
}

TEST(AggregateStats, EmptyInput) {
  try {
    aggregate_stats(std::vector<RunRecord>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
}

TEST(AggregateStats, OutliersKeptUnlessTrimRequested) {
  std::vector<RunRecord> r;
  for (int i = 0; i < 9; ++i) r.push_back(record_joules(1));
  r.push_back(record_joules(1000));
  EXPECT_NEAR(aggregate_stats(r).max_kwh * kJoulesPerKwh, 1000, 1e-9);
  const auto trimmed = aggregate_stats(r, 0.1);
  EXPECT_EQ(trimmed.n_runs, 8u);
  EXPECT_NEAR(trimmed.max_kwh * kJoulesPerKwh, 1, 1e-12);
}

TEST(RelativeOverhead, Cases) {
  MeasurementStats a, b;
  a.mean_kwh = b.mean_kwh = 1e-6;
  EXPECT_EQ(relative_overhead(a, b), 1.0);
  a.mean_kwh = 2e-6;
  EXPECT_EQ(relative_overhead(a, b), 2.0);
  b.mean_kwh = 0;
  try {
    relative_overhead(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroBaseline);
  }
}

TEST(RunPair, IdenticalNoOpsGiveUnitRatio) {
  auto m = simulated_meter();
  FunctionWorkload p("noop", Variant::kPrivate, {Overhead::kComputational}, [] {});
  FunctionWorkload b("noop", Variant::kPlaintext, {}, [] {});
  const auto r = run_pair(p, b, {.iterations = 1000000, .warmup = 5}, m, nl());
  ASSERT_TRUE(r.overhead_ratio.has_value());
  EXPECT_NEAR(*r.overhead_ratio, 1.0, 0.05);
}

TEST(RunPair, TwiceTheSleepTwiceTheEnergy) {
  auto m = simulated_meter(10.0);
  auto p = sleeper(Variant::kPrivate, 20ms);
  auto b = sleeper(Variant::kPlaintext, 10ms);
  const auto r = run_pair(p, b, {.iterations = 10, .warmup = 1}, m, nl());
  ASSERT_TRUE(r.overhead_ratio.has_value());
  EXPECT_NEAR(*r.overhead_ratio, 2.0, 0.1);
  // Analytic P*t oracle on the constant trace.
  EXPECT_NEAR(r.private_stats.mean_kwh * kJoulesPerKwh, 10.0 * 0.020, 10.0 * 0.004);
}

TEST(RunPair, ZeroIterationsRejected) {
  auto m = simulated_meter();
  auto p = sleeper(Variant::kPrivate, 0us);
  auto b = sleeper(Variant::kPlaintext, 0us);
  try {
    run_pair(p, b, {.iterations = 0}, m, nl());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(RunPair, ContractValidation) {
  auto m = simulated_meter();
  FunctionWorkload p("a", Variant::kPrivate, {Overhead::kComputational}, [] {});
  FunctionWorkload b("b", Variant::kPlaintext, {}, [] {});
  EXPECT_THROW(run_pair(p, b, {.iterations = 1}, m, nl()), Error);
  FunctionWorkload untagged("a", Variant::kPrivate, {}, [] {});
  FunctionWorkload b2("a", Variant::kPlaintext, {}, [] {});
  EXPECT_THROW(run_pair(untagged, b2, {.iterations = 1}, m, nl()), Error);
  EXPECT_THROW(run_pair(b2, p, {.iterations = 1}, m, nl()), Error);
}

TEST(RunPair, InterleavesAndExcludesWarmup) {
  auto m = simulated_meter();
  int p_calls = 0, b_calls = 0, setups = 0, teardowns = 0;
  std::vector<char> order;
  FunctionWorkload p(
      "x", Variant::kPrivate, {Overhead::kComputational},
      [&] {
        ++p_calls;
        order.push_back('P');
      },
      [&] { ++setups; }, [&] { ++teardowns; });
  FunctionWorkload b(
      "x", Variant::kPlaintext, {},
      [&] {
        ++b_calls;
        order.push_back('B');
      },
      [&] { ++setups; }, [&] { ++teardowns; });
  const auto r = run_pair(p, b, {.iterations = 7, .warmup = 3}, m, nl());
  EXPECT_EQ(p_calls, 10);
  EXPECT_EQ(b_calls, 10);
  EXPECT_EQ(setups, 2);
  EXPECT_EQ(teardowns, 2);
  EXPECT_EQ(r.private_stats.n_runs, 7u);
  EXPECT_EQ(r.baseline_stats.n_runs, 7u);
  ASSERT_EQ(r.runs.size(), 14u);
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    EXPECT_EQ(r.runs[i].sequence, i);
    EXPECT_EQ(r.runs[i].run_index, i / 2);
    EXPECT_EQ(r.runs[i].variant, i % 2 == 0 ? Variant::kPrivate : Variant::kPlaintext);
  }
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(order[i], i % 2 ? 'B' : 'P');
}

TEST(RunPair, SetupAndTeardownOutsideWindows) {
  auto m = simulated_meter(10.0);
  FunctionWorkload p(
      "s", Variant::kPrivate, {Overhead::kComputational}, [] {},
      [] { std::this_thread::sleep_for(200ms); }, [] { std::this_thread::sleep_for(200ms); });
  FunctionWorkload b("s", Variant::kPlaintext, {}, [] {});
  const auto r = run_pair(p, b, {.iterations = 3, .warmup = 0}, m, nl());
  // 200 ms at 10 W would be 2 J; per-run windows stay far below that.
  EXPECT_LT(r.private_stats.max_kwh * kJoulesPerKwh, 0.5);
}

TEST(RunPair, FailurePreservesPartialRuns) {
  auto m = simulated_meter();
  int calls = 0;
  FunctionWorkload p("f", Variant::kPrivate, {Overhead::kComputational}, [&] {
    if (++calls == 3) throw std::runtime_error("boom");
  });
  FunctionWorkload b("f", Variant::kPlaintext, {}, [] {});
  try {
    run_pair(p, b, {.iterations = 5, .warmup = 0}, m, nl());
    FAIL();
  } catch (const WorkloadFailure& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWorkloadFailure);
    EXPECT_EQ(e.partial_runs().size(), 4u);
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
}

TEST(RunPair, RuntimeAndEnergyBothPopulatedAndConsistent) {
  auto m = simulated_meter();
  auto p = sleeper(Variant::kPrivate, 5ms);
  auto b = sleeper(Variant::kPlaintext, 2ms);
  const auto r = run_pair(p, b, {.iterations = 5, .warmup = 0}, m, nl());
  const double interval_s = m.config().interval_ms * 1e-3;
  for (const auto& run : r.runs) {
    EXPECT_GT(run.runtime_s, 0);
    EXPECT_GT(run.breakdown.total_kwh, 0);
    EXPECT_NEAR(run.breakdown.duration_s, run.runtime_s, 2 * interval_s);
  }
  EXPECT_GT(r.private_stats.mean_runtime_s, 0);
  EXPECT_GT(r.baseline_stats.mean_runtime_s, 0);
}

TEST(RunPair, RatioBitIdenticalAcrossCountries) {
  auto m = simulated_meter();
  auto p = sleeper(Variant::kPrivate, 3ms);
  auto b = sleeper(Variant::kPlaintext, 1ms);
  const auto r = run_pair(p, b, {.iterations = 5, .warmup = 0}, m, nl());
  const auto& table = carbon::IntensityTable::builtin();
  for (const char* cc : {"FR", "PL", "NL"}) {
    const auto other = rescore(r, table.lookup(cc));
    const double recomputed = relative_overhead(other.private_stats, other.baseline_stats);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(recomputed),
              std::bit_cast<std::uint64_t>(*r.overhead_ratio));
    EXPECT_EQ(other.private_emissions_g,
              other.private_stats.mean_kwh * table.lookup(cc).g_per_kwh);
  }
}

TEST(RunPair, ZeroBaselineLeavesRatioEmpty) {
  // Counter never moves: a 0 W trace makes every window cost nothing.
  auto m = simulated_meter(0.0);
  FunctionWorkload p("z", Variant::kPrivate, {Overhead::kComputational}, [] {});
  FunctionWorkload b("z", Variant::kPlaintext, {}, [] {});
  const auto r = run_pair(p, b, {.iterations = 2, .warmup = 0}, m, nl());
  EXPECT_FALSE(r.overhead_ratio.has_value());
  EXPECT_EQ(r.baseline_stats.mean_kwh, 0);
}

TEST(RunPair, RamDomainReportedSeparately) {
  meter::MeterConfig cfg;
  cfg.ram_installed_gb = 8;
  auto m = meter::Meter::open(cfg);
  auto p = sleeper(Variant::kPrivate, 2ms);
  auto b = sleeper(Variant::kPlaintext, 1ms);
  const auto r = run_pair(p, b, {.iterations = 2, .warmup = 0}, m, nl());
  for (const auto& run : r.runs) {
    ASSERT_TRUE(run.breakdown.per_domain_kwh.contains("ram"));
    EXPECT_NEAR(run.breakdown.per_domain_kwh.at("ram"), 3.0 * run.breakdown.duration_s / 3.6e6,
                1e-15);
  }
}

TEST(SplitCommandLine, QuotesAndEscapes) {
  EXPECT_EQ(split_command_line("sleep 0.1"), (std::vector<std::string>{"sleep", "0.1"}));
  EXPECT_EQ(split_command_line("  a  'b c' \"d\\\"e\" f\\ g"),
            (std::vector<std::string>{"a", "b c", "d\"e", "f g"}));
  EXPECT_EQ(split_command_line("x ''"), (std::vector<std::string>{"x", ""}));
  EXPECT_THROW(split_command_line("a 'b"), Error);
}

TEST(RunExternal, NoOpCommandCostsPowerTimesRuntime) {
  auto m = simulated_meter(10.0);
  const auto r = run_external({"true"}, 5, m, nl());
  EXPECT_EQ(r.stats.n_runs, 5u);
  EXPECT_GT(r.stats.mean_kwh, 0);
  const double expected_j = 10.0 * r.stats.mean_runtime_s;
  EXPECT_NEAR(r.stats.mean_kwh * kJoulesPerKwh, expected_j, 10.0 * 2e-3);
}

TEST(RunExternal, MissingBinaryIsSpawnFailure) {
  auto m = simulated_meter();
  try {
    run_external({"/nonexistent/petcarbon-no-such-binary"}, 1, m, nl());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSpawnFailure);
  }
}

TEST(RunExternal, FailingCommandIsNonZeroExit) {
  auto m = simulated_meter();
  try {
    run_external({"false"}, 1, m, nl());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonZeroExit);
  }
}

TEST(RunExternal, SleepDurationsScaleEnergy) {
  auto m = simulated_meter(10.0);
  const auto short_run = run_external({"sleep", "0.1"}, 3, m, nl());
  const auto long_run = run_external({"sleep", "0.2"}, 3, m, nl());
  EXPECT_NEAR(long_run.stats.mean_kwh / short_run.stats.mean_kwh, 2.0, 0.4);
}

}  // namespace
}  // namespace petcarbon::harness

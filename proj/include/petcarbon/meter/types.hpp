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
#include <functional>
#include <map>
#include <string>

#include "petcarbon/meter/power_trace.hpp"

namespace petcarbon::meter {

inline constexpr std::uint64_t kDefaultMaxRangeUj = std::uint64_t{1} << 32;
inline constexpr double kMicrojoulesPerKwh = 3.6e12;
inline constexpr double kRamWattsPerGb = 0.375;

enum class DomainKind { kPackage, kDram, kSimulated };
enum class BackendKind { kPowercap, kSimulated };

std::string_view to_string(DomainKind kind);
std::string_view to_string(BackendKind kind);
BackendKind parse_backend(std::string_view name);

struct PowerDomain {
  std::string id;     // e.g. "intel-rapl:0"
  std::string label;  // contents of the `name` file, e.g. "package-0"
  DomainKind kind = DomainKind::kPackage;
  std::uint64_t max_range_uj = kDefaultMaxRangeUj;
};

/// One cumulative-counter reading. `domain` indexes Meter::domains().
struct EnergySample {
  std::int64_t t_ns = 0;  // monotonic clock
  std::size_t domain = 0;
  std::uint64_t counter_uj = 0;

  friend bool operator==(const EnergySample&, const EnergySample&) = default;
};

/// Returns monotonic nanoseconds. Injected into the simulated backend by tests.
using ClockFn = std::function<std::int64_t()>;

std::int64_t steady_now_ns();

struct SimulatedOptions {
  PowerTrace trace = PowerTrace::constant(10.0);
  std::uint64_t max_range_uj = kDefaultMaxRangeUj;
  std::uint64_t initial_counter_uj = 0;
  ClockFn clock;  // empty: steady clock
};

struct MeterConfig {
  int interval_ms = 1;
  BackendKind backend = BackendKind::kSimulated;
  double ram_installed_gb = 0.0;
  std::string powercap_root = "/sys/class/powercap";
  SimulatedOptions simulated;
};

/// Applies PETCARBON_METER and PETCARBON_POWERCAP_ROOT on top of `config`.
MeterConfig apply_env_overrides(MeterConfig config);

struct EnergyBreakdown {
  std::map<std::string, double> per_domain_kwh;
  std::map<std::string, std::uint64_t> per_domain_uj;  // counter domains only
  double total_kwh = 0.0;
  double duration_s = 0.0;
  std::size_t sample_count = 0;
};

inline double uj_to_kwh(double uj) { return uj / kMicrojoulesPerKwh; }
inline double kwh_to_joules(double kwh) { return kwh * 3.6e6; }

/// Constant RAM power model: installed_gb * 0.375 W/GB.
double ram_power_watts(double installed_gb);

/// Adds a "ram" domain worth `watts` over the breakdown's duration.
void add_ram_domain(EnergyBreakdown& breakdown, double watts);

}  // namespace petcarbon::meter

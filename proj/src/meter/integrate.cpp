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

#include "petcarbon/meter/integrate.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "petcarbon/common/error.hpp"

namespace petcarbon::meter {

std::uint64_t delta_energy(std::uint64_t prev, std::uint64_t next, std::uint64_t max_range) {
  if (max_range == 0) throw Error(ErrorCode::kInvalidCounter, "max_range must be positive");
  if (prev >= max_range || next >= max_range) {
    throw Error(ErrorCode::kInvalidCounter,
                "counter reading " + std::to_string(std::max(prev, next)) +
                    " outside range " + std::to_string(max_range));
  }
  return next >= prev ? next - prev : max_range - prev + next;
}

EnergyBreakdown integrate(std::span<const EnergySample> samples,
                          std::span<const PowerDomain> domains) {
  struct Acc {
    std::uint64_t uj = 0;
    std::size_t count = 0;
    std::uint64_t last_counter = 0;
    std::int64_t last_t = 0;
  };
  std::vector<Acc> acc(domains.size());
  std::int64_t t_min = std::numeric_limits<std::int64_t>::max();
  std::int64_t t_max = std::numeric_limits<std::int64_t>::min();

  for (const auto& s : samples) {
    if (s.domain >= domains.size()) {
      throw Error(ErrorCode::kInvalidArgument, "sample references unknown domain");
    }
    auto& a = acc[s.domain];
    if (a.count > 0) {
      if (s.t_ns <= a.last_t) {
        throw Error(ErrorCode::kInvalidArgument, "samples not time-ordered within domain");
      }
      a.uj += delta_energy(a.last_counter, s.counter_uj, domains[s.domain].max_range_uj);
    } else if (s.counter_uj >= domains[s.domain].max_range_uj) {
      throw Error(ErrorCode::kInvalidCounter, "counter reading outside domain range");
    }
    a.last_counter = s.counter_uj;
    a.last_t = s.t_ns;
    ++a.count;
    t_min = std::min(t_min, s.t_ns);
    t_max = std::max(t_max, s.t_ns);
  }

  EnergyBreakdown out;
  bool any_interval = false;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    out.sample_count = std::max(out.sample_count, acc[i].count);
    if (acc[i].count < 2) continue;
    any_interval = true;
    const double kwh = uj_to_kwh(static_cast<double>(acc[i].uj));
    out.per_domain_uj[domains[i].id] = acc[i].uj;
    out.per_domain_kwh[domains[i].id] = kwh;
    out.total_kwh += kwh;
  }
  if (!any_interval) {
    throw Error(ErrorCode::kEmptyWindow, "need at least two samples for some domain");
  }
  out.duration_s = static_cast<double>(t_max - t_min) * 1e-9;
  return out;
}

double ram_power_watts(double installed_gb) {
  if (installed_gb < 0) {
    throw Error(ErrorCode::kInvalidArgument, "installed RAM must be non-negative");
  }
  return installed_gb * kRamWattsPerGb;
}

void add_ram_domain(EnergyBreakdown& breakdown, double watts) {
  const double kwh = watts * breakdown.duration_s / 3.6e6;
  breakdown.per_domain_kwh["ram"] = kwh;
  breakdown.total_kwh = 0;
  for (const auto& [id, v] : breakdown.per_domain_kwh) breakdown.total_kwh += v;
}

}  // namespace petcarbon::meter

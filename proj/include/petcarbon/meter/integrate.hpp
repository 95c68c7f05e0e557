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
#include <span>

#include "petcarbon/meter/types.hpp"

namespace petcarbon::meter {

/// Wraparound-safe counter difference: (next - prev) mod max_range.
/// Throws InvalidCounter if either reading is outside [0, max_range).
std::uint64_t delta_energy(std::uint64_t prev, std::uint64_t next, std::uint64_t max_range);

/// Sums wrap-safe deltas over consecutive samples of each domain.
///
/// Samples may interleave domains but must be time-ordered within a domain.
/// A domain with fewer than two samples contributes nothing; if no domain has
/// two samples the window is empty and EmptyWindow is thrown.
EnergyBreakdown integrate(std::span<const EnergySample> samples,
                          std::span<const PowerDomain> domains);

}  // namespace petcarbon::meter

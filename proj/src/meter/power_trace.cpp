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

#include "petcarbon/meter/power_trace.hpp"

#include <algorithm>

#include "petcarbon/common/error.hpp"

namespace petcarbon::meter {

PowerTrace::PowerTrace(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "power trace needs at least one segment");
  }
  for (const auto& s : segments_) {
    if (s.duration_s <= 0 || s.watts < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "power trace segments need positive duration and non-negative power");
    }
  }
}

PowerTrace PowerTrace::constant(double watts) { return PowerTrace({{1.0, watts}}); }

PowerTrace PowerTrace::steps(std::vector<Segment> segments) {
  return PowerTrace(std::move(segments));
}

double PowerTrace::power_at(double t_s) const {
  double start = 0;
  for (const auto& s : segments_) {
    if (t_s < start + s.duration_s) return s.watts;
    start += s.duration_s;
  }
  return segments_.back().watts;
}

double PowerTrace::max_power() const {
  double m = 0;
  for (const auto& s : segments_) m = std::max(m, s.watts);
  return m;
}

double PowerTrace::cumulative_uj(double t_s) const {
  if (t_s <= 0) return 0;
  double joules = 0;
  double start = 0;
  for (const auto& s : segments_) {
    const double end = start + s.duration_s;
    if (t_s <= end) return (joules + s.watts * (t_s - start)) * 1e6;
    joules += s.watts * s.duration_s;
    start = end;
  }
  joules += segments_.back().watts * (t_s - start);
  return joules * 1e6;
}

}  // namespace petcarbon::meter

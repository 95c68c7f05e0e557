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

#include <vector>

namespace petcarbon::meter {

/// Piecewise-constant synthetic power signal driving the simulated backend.
/// Time is seconds since the meter was opened; the last segment's power
/// holds forever after the listed segments end.
class PowerTrace {
 public:
  struct Segment {
    double duration_s;
    double watts;
  };

  static PowerTrace constant(double watts);
  static PowerTrace steps(std::vector<Segment> segments);

  double power_at(double t_s) const;
  double max_power() const;

  /// Analytic integral of the trace over [0, t_s], microjoules.
  double cumulative_uj(double t_s) const;

  double energy_uj(double t0_s, double t1_s) const {
    return cumulative_uj(t1_s) - cumulative_uj(t0_s);
  }

  const std::vector<Segment>& segments() const { return segments_; }

 private:
  explicit PowerTrace(std::vector<Segment> segments);
  std::vector<Segment> segments_;
};

}  // namespace petcarbon::meter

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

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "petcarbon/meter/meter.hpp"

namespace petcarbon::meter {

/// Bounded, ordered store of sampler ticks (one sample per domain per tick).
///
/// When full, every second tick after the first is dropped and the buffer keeps
/// filling. Cumulative counters make this lossless for energy as long as the
/// spacing of kept ticks stays below the counter wrap period.
class TickBuffer {
 public:
  TickBuffer(std::size_t domains_per_tick, std::size_t max_ticks);

  void push(std::vector<EnergySample> tick);
  std::vector<EnergySample> take();

  std::size_t ticks() const;
  std::size_t decimations() const;

 private:
  mutable std::mutex mu_;
  std::size_t per_tick_;
  std::size_t max_ticks_;
  std::vector<EnergySample> samples_;
  std::size_t decimations_ = 0;
};

/// Polls every domain of a meter on a fixed grid from a dedicated thread.
///
/// Ticks fire at t0 + k*interval where t0 is the launch time, never
/// rescheduled from completion time. Ticks missed by a short stall fire back to
/// back; after a long stall the grid resumes at the next point. Samples are kept only
/// while a measurement window is open. Each window starts and ends with a
/// synchronous sample, so its span is exactly the code between the two calls.
///
/// One-shot use: start() ... stop(). Repeated windows on one thread:
/// launch(), then begin_window()/end_window() pairs, then halt().
class Sampler {
 public:
  static constexpr std::size_t kDefaultMaxTicks = std::size_t{1} << 20;

  Sampler(Meter& meter, std::chrono::milliseconds interval,
          std::size_t max_ticks = kDefaultMaxTicks);
  ~Sampler();
  Sampler(const Sampler&) = delete;
  Sampler& operator=(const Sampler&) = delete;

  /// launch() + begin_window().
  void start();
  /// end_window() + halt(). Rethrows a ReadFailure raised on the sampling thread.
  std::vector<EnergySample> stop();

  void launch();
  void halt();
  void begin_window();
  std::vector<EnergySample> end_window();

  bool running() const { return thread_.joinable(); }
  std::size_t decimations() const { return buffer_.decimations(); }

 private:
  void loop(std::chrono::steady_clock::time_point t0);
  void push_now();  // requires mu_
  void rethrow_pending();  // requires mu_

  Meter& meter_;
  std::chrono::milliseconds interval_;
  TickBuffer buffer_;
  std::thread thread_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stop_requested_ = false;
  bool window_open_ = false;
  std::exception_ptr error_;
};

/// Convenience: sample `meter` around `fn()` and integrate the window, adding
/// the RAM model domain when configured.
template <typename Fn>
EnergyBreakdown measure(Meter& meter, Fn&& fn);

}  // namespace petcarbon::meter

#include "petcarbon/meter/integrate.hpp"

namespace petcarbon::meter {

template <typename Fn>
EnergyBreakdown measure(Meter& meter, Fn&& fn) {
  Sampler sampler(meter, std::chrono::milliseconds(meter.config().interval_ms));
  sampler.start();
  try {
    fn();
  } catch (...) {
    try {
      sampler.stop();
    } catch (...) {
    }
    throw;
  }
  auto samples = sampler.stop();
  auto breakdown = integrate(samples, meter.domains());
  if (meter.ram_watts() > 0) add_ram_domain(breakdown, meter.ram_watts());
  return breakdown;
}

}  // namespace petcarbon::meter

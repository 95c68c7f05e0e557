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

#include "petcarbon/meter/sampler.hpp"

#include "petcarbon/common/error.hpp"

namespace petcarbon::meter {

namespace {
constexpr std::int64_t kMaxCatchUpTicks = 64;
}  // namespace

TickBuffer::TickBuffer(std::size_t domains_per_tick, std::size_t max_ticks)
    : per_tick_(domains_per_tick), max_ticks_(std::max<std::size_t>(max_ticks, 4)) {}

void TickBuffer::push(std::vector<EnergySample> tick) {
  std::lock_guard lock(mu_);
  if (samples_.size() / per_tick_ >= max_ticks_) {
    const std::size_t n = samples_.size() / per_tick_;
    std::vector<EnergySample> kept;
    kept.reserve(samples_.size() / 2 + per_tick_);
    for (std::size_t t = 0; t < n; t += 2) {
      auto first = samples_.begin() + static_cast<std::ptrdiff_t>(t * per_tick_);
      kept.insert(kept.end(), first, first + static_cast<std::ptrdiff_t>(per_tick_));
    }
    samples_ = std::move(kept);
    ++decimations_;
  }
  samples_.insert(samples_.end(), tick.begin(), tick.end());
}

std::vector<EnergySample> TickBuffer::take() {
  std::lock_guard lock(mu_);
  return std::exchange(samples_, {});
}

std::size_t TickBuffer::ticks() const {
  std::lock_guard lock(mu_);
  return samples_.size() / per_tick_;
}

std::size_t TickBuffer::decimations() const {
  std::lock_guard lock(mu_);
  return decimations_;
}

Sampler::Sampler(Meter& meter, std::chrono::milliseconds interval, std::size_t max_ticks)
    : meter_(meter), interval_(interval), buffer_(meter.domains().size(), max_ticks) {
  if (interval_.count() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "sampling interval must be >= 1 ms");
  }
}

Sampler::~Sampler() {
  if (running()) {
    {
      std::lock_guard lock(mu_);
      stop_requested_ = true;
    }
    cv_.notify_all();
    thread_.join();
    meter_.release_sampler();
  }
}

void Sampler::launch() {
  if (running()) throw Error(ErrorCode::kSamplerBusy, "sampler already running");
  if (!meter_.try_acquire_sampler()) {
    throw Error(ErrorCode::kSamplerBusy, "another sampler is attached to this meter");
  }
  {
    std::lock_guard lock(mu_);
    stop_requested_ = false;
    window_open_ = false;
    error_ = nullptr;
  }
  buffer_.take();
  try {
    const auto t0 = std::chrono::steady_clock::now();
    thread_ = std::thread([this, t0] { loop(t0); });
  } catch (...) {
    meter_.release_sampler();
    throw;
  }
}

void Sampler::halt() {
  if (!running()) throw Error(ErrorCode::kInvalidArgument, "sampler not running");
  {
    std::lock_guard lock(mu_);
    stop_requested_ = true;
    window_open_ = false;
  }
  cv_.notify_all();
  thread_.join();
  meter_.release_sampler();
}

void Sampler::push_now() { buffer_.push(meter_.read_all()); }

void Sampler::rethrow_pending() {
  if (error_) {
    auto err = std::exchange(error_, nullptr);
    window_open_ = false;
    buffer_.take();
    std::rethrow_exception(err);
  }
}

void Sampler::begin_window() {
  if (!running()) throw Error(ErrorCode::kInvalidArgument, "sampler not running");
  std::lock_guard lock(mu_);
  rethrow_pending();
  buffer_.take();
  push_now();
  window_open_ = true;
}

std::vector<EnergySample> Sampler::end_window() {
  std::lock_guard lock(mu_);
  if (!window_open_ && !error_) {
    throw Error(ErrorCode::kInvalidArgument, "no measurement window open");
  }
  rethrow_pending();
  window_open_ = false;
  try {
    push_now();
  } catch (...) {
    buffer_.take();
    throw;
  }
  return buffer_.take();
}

void Sampler::start() {
  launch();
  try {
    begin_window();
  } catch (...) {
    halt();
    throw;
  }
}

std::vector<EnergySample> Sampler::stop() {
  if (!running()) throw Error(ErrorCode::kInvalidArgument, "sampler not running");
  std::vector<EnergySample> samples;
  try {
    samples = end_window();
  } catch (...) {
    halt();
    throw;
  }
  halt();
  return samples;
}

void Sampler::loop(std::chrono::steady_clock::time_point t0) {
  std::int64_t k = 1;
  std::unique_lock lock(mu_);
  while (true) {
    const auto next = t0 + k * interval_;
    if (cv_.wait_until(lock, next, [this] { return stop_requested_; })) return;
    if (window_open_ && !error_) {
      try {
        push_now();
      } catch (...) {
        error_ = std::current_exception();
      }
    }
    // Next tick comes from the ideal grid, so a late wakeup is followed by
    // an early one. Only a long stall drops ticks.
    const auto behind = (std::chrono::steady_clock::now() - t0) / interval_ - k;
    k = behind > kMaxCatchUpTicks ? k + behind + 1 : k + 1;
  }
}

}  // namespace petcarbon::meter

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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "petcarbon/meter/types.hpp"

namespace petcarbon::meter {

struct CounterReading {
  std::int64_t t_ns;
  std::uint64_t uj;
};

/// Source of raw cumulative counters.
class CounterBackend {
 public:
  virtual ~CounterBackend() = default;
  virtual BackendKind kind() const = 0;
  virtual const std::vector<PowerDomain>& domains() const = 0;
  virtual CounterReading read(std::size_t domain) = 0;
};

/// Reads `<root>/intel-rapl:N[:M]/energy_uj`. Only package-* and dram zones are
/// kept: core/uncore are subsets of the package and would double count.
class PowercapBackend final : public CounterBackend {
 public:
  explicit PowercapBackend(std::filesystem::path root);

  BackendKind kind() const override { return BackendKind::kPowercap; }
  const std::vector<PowerDomain>& domains() const override { return domains_; }
  CounterReading read(std::size_t domain) override;

 private:
  std::filesystem::path root_;
  std::vector<PowerDomain> domains_;
  std::vector<std::filesystem::path> counter_files_;
};

/// One PACKAGE domain whose counter is the analytic integral of a PowerTrace,
/// wrapped at max_range_uj.
class SimulatedBackend final : public CounterBackend {
 public:
  explicit SimulatedBackend(SimulatedOptions options);

  BackendKind kind() const override { return BackendKind::kSimulated; }
  const std::vector<PowerDomain>& domains() const override { return domains_; }
  CounterReading read(std::size_t domain) override;

  const PowerTrace& trace() const { return options_.trace; }
  std::int64_t epoch_ns() const { return epoch_ns_; }

 private:
  SimulatedOptions options_;
  std::vector<PowerDomain> domains_;
  std::int64_t epoch_ns_;
};

/// Parses an `energy_uj` / `max_energy_range_uj` body: base-10 digits, then an
/// optional trailing newline. Throws ReadFailure otherwise.
std::uint64_t parse_counter_text(std::string_view text);

/// Open meter. Movable; safe to hand to another thread, but at most one
/// Sampler may be attached at a time.
class Meter {
 public:
  static Meter open(const MeterConfig& config);

  /// Wraps an existing backend; used for tests with custom counter sources.
  Meter(MeterConfig config, std::unique_ptr<CounterBackend> backend);

  Meter(Meter&&) noexcept = default;
  Meter& operator=(Meter&&) noexcept = default;

  const std::vector<PowerDomain>& domains() const { return state_->backend->domains(); }
  BackendKind backend_kind() const { return state_->backend->kind(); }
  const MeterConfig& config() const { return state_->config; }
  CounterBackend& backend() { return *state_->backend; }

  EnergySample read(std::size_t domain);
  /// One sample per domain, in domain order.
  std::vector<EnergySample> read_all();

  double ram_watts() const { return ram_power_watts(state_->config.ram_installed_gb); }

  bool try_acquire_sampler() {
    return !state_->sampler_active.exchange(true, std::memory_order_acq_rel);
  }
  void release_sampler() { state_->sampler_active.store(false, std::memory_order_release); }

 private:
  struct State {
    MeterConfig config;
    std::unique_ptr<CounterBackend> backend;
    std::vector<std::int64_t> last_t;
    std::atomic<bool> sampler_active{false};
  };
  std::unique_ptr<State> state_;
};

}  // namespace petcarbon::meter

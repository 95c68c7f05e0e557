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

#include "petcarbon/meter/meter.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <regex>
#include <set>

#include "petcarbon/common/error.hpp"

namespace fs = std::filesystem;

namespace petcarbon::meter {

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::kPackage: return "PACKAGE";
    case DomainKind::kDram: return "DRAM";
    case DomainKind::kSimulated: return "SIMULATED";
  }
  return "?";
}

std::string_view to_string(BackendKind kind) {
  return kind == BackendKind::kPowercap ? "powercap" : "simulated";
}

BackendKind parse_backend(std::string_view name) {
  if (name == "powercap") return BackendKind::kPowercap;
  if (name == "simulated") return BackendKind::kSimulated;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown meter backend '" + std::string(name) + "' (simulated|powercap)");
}

std::int64_t steady_now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

MeterConfig apply_env_overrides(MeterConfig config) {
  if (const char* m = std::getenv("PETCARBON_METER"); m != nullptr && *m != '\0') {
    config.backend = parse_backend(m);
  }
  if (const char* r = std::getenv("PETCARBON_POWERCAP_ROOT"); r != nullptr && *r != '\0') {
    config.powercap_root = r;
  }
  return config;
}

std::uint64_t parse_counter_text(std::string_view text) {
  std::size_t end = text.size();
  if (end > 0 && text[end - 1] == '\n') --end;
  if (end == 0 || end > 20) {
    throw Error(ErrorCode::kReadFailure, "malformed counter text");
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < end; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::kReadFailure, "malformed counter text '" +
                                               std::string(text.substr(0, end)) + "'");
    }
    const std::uint64_t digit = static_cast<std::uint64_t>(c - '0');
    if (v > (UINT64_MAX - digit) / 10) {
      throw Error(ErrorCode::kReadFailure, "counter value overflows 64 bits");
    }
    v = v * 10 + digit;
  }
  return v;
}

namespace {

// open/read/close per call: a vanished counter file must surface as a
// ReadFailure, which a cached descriptor would hide.
std::string read_small_file(const fs::path& path, ErrorCode on_error) {
  const int fd = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd < 0) {
    throw Error(on_error, path.string() + ": " + std::strerror(errno));
  }
  std::array<char, 64> buf{};
  const ssize_t n = ::read(fd, buf.data(), buf.size());
  const int saved = errno;
  ::close(fd);
  if (n < 0) throw Error(on_error, path.string() + ": " + std::strerror(saved));
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

std::string trim_newline(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

}  // namespace

PowercapBackend::PowercapBackend(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  if (!fs::is_directory(root_, ec)) {
    throw Error(ErrorCode::kBackendUnavailable,
                "no powercap tree at " + root_.string());
  }
  static const std::regex kZone(R"(intel-rapl:(\d+)(:(\d+))?)");

  // Zones appear both at the top level and nested under their parent.
  std::map<std::string, fs::path> zones;
  auto scan = [&](const fs::path& dir) {
    std::error_code iter_ec;
    for (fs::directory_iterator it(dir, iter_ec), end; !iter_ec && it != end;
         it.increment(iter_ec)) {
      const std::string name = it->path().filename().string();
      if (std::regex_match(name, kZone) && fs::is_directory(it->path(), ec)) {
        zones.emplace(name, it->path());
      }
    }
  };
  scan(root_);
  for (const auto& [name, path] : std::map<std::string, fs::path>(zones)) scan(path);

  for (const auto& [name, path] : zones) {
    std::string label;
    try {
      label = trim_newline(read_small_file(path / "name", ErrorCode::kBackendUnavailable));
    } catch (const Error&) {
      continue;
    }
    DomainKind kind;
    if (label.rfind("package", 0) == 0) {
      kind = DomainKind::kPackage;
    } else if (label == "dram") {
      kind = DomainKind::kDram;
    } else {
      continue;
    }
    PowerDomain d{name, label, kind, kDefaultMaxRangeUj};
    if (fs::exists(path / "max_energy_range_uj", ec)) {
      try {
        const auto r = parse_counter_text(
            read_small_file(path / "max_energy_range_uj", ErrorCode::kBackendUnavailable));
        if (r > 0) d.max_range_uj = r;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kBackendUnavailable) throw;
      }
    }
    // Permission denied on energy_uj is the common failure mode on modern
    // kernels; surface it now rather than on the first tick.
    read_small_file(path / "energy_uj", ErrorCode::kBackendUnavailable);
    domains_.push_back(std::move(d));
    counter_files_.push_back(path / "energy_uj");
  }
  if (domains_.empty()) {
    throw Error(ErrorCode::kBackendUnavailable,
                "no package or dram zones under " + root_.string());
  }
}

CounterReading PowercapBackend::read(std::size_t domain) {
  const auto v = parse_counter_text(read_small_file(counter_files_.at(domain),
                                                    ErrorCode::kReadFailure));
  if (v >= domains_[domain].max_range_uj) {
    throw Error(ErrorCode::kReadFailure, "counter exceeds advertised range");
  }
  return {steady_now_ns(), v};
}

SimulatedBackend::SimulatedBackend(SimulatedOptions options) : options_(std::move(options)) {
  if (options_.max_range_uj == 0) {
    throw Error(ErrorCode::kInvalidArgument, "simulated max_range_uj must be positive");
  }
  if (!options_.clock) options_.clock = steady_now_ns;
  domains_.push_back(
      PowerDomain{"sim:package-0", "package-0", DomainKind::kPackage, options_.max_range_uj});
  epoch_ns_ = options_.clock();
}

CounterReading SimulatedBackend::read(std::size_t domain) {
  if (domain != 0) throw Error(ErrorCode::kReadFailure, "simulated meter has one domain");
  const std::int64_t now = options_.clock();
  const double t_s = static_cast<double>(now - epoch_ns_) * 1e-9;
  const auto uj = static_cast<std::uint64_t>(std::floor(options_.trace.cumulative_uj(t_s)));
  const auto range = options_.max_range_uj;
  return {now, (options_.initial_counter_uj % range + uj % range) % range};
}

Meter::Meter(MeterConfig config, std::unique_ptr<CounterBackend> backend)
    : state_(std::make_unique<State>()) {
  if (config.interval_ms < 1) {
    throw Error(ErrorCode::kInvalidArgument, "interval_ms must be >= 1");
  }
  if (config.ram_installed_gb < 0) {
    throw Error(ErrorCode::kInvalidArgument, "ram_installed_gb must be >= 0");
  }
  state_->config = std::move(config);
  state_->backend = std::move(backend);
  state_->last_t.assign(state_->backend->domains().size(),
                        std::numeric_limits<std::int64_t>::min());
}

Meter Meter::open(const MeterConfig& config) {
  std::unique_ptr<CounterBackend> backend;
  if (config.backend == BackendKind::kPowercap) {
    backend = std::make_unique<PowercapBackend>(config.powercap_root);
  } else {
    backend = std::make_unique<SimulatedBackend>(config.simulated);
  }
  return Meter(config, std::move(backend));
}

EnergySample Meter::read(std::size_t domain) {
  auto& b = *state_->backend;
  if (domain >= b.domains().size()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown domain index");
  }
  const auto [t_raw, v] = b.read(domain);
  std::int64_t t = t_raw;
  // Strictly increasing per domain even if the clock reads identical values.
  auto& last = state_->last_t[domain];
  if (t <= last) t = last + 1;
  last = t;
  return EnergySample{t, domain, v};
}

std::vector<EnergySample> Meter::read_all() {
  std::vector<EnergySample> out;
  out.reserve(domains().size());
  for (std::size_t i = 0; i < domains().size(); ++i) out.push_back(read(i));
  return out;
}

}  // namespace petcarbon::meter

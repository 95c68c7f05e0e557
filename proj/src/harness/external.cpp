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

#include "petcarbon/harness/external.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

extern char** environ;

namespace petcarbon::harness {

std::vector<std::string> split_command_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_token = false;
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote != 0) {
      if (c == quote) {
        quote = 0;
      } else if (c == '\\' && quote == '"' && i + 1 < line.size()) {
        cur.push_back(line[++i]);
      } else {
        cur.push_back(c);
      }
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
    } else if (c == '\\' && i + 1 < line.size()) {
      cur.push_back(line[++i]);
      in_token = true;
    } else if (c == ' ' || c == '\t' || c == '\n') {
      if (in_token) {
        out.push_back(std::move(cur));
        cur.clear();
        in_token = false;
      }
    } else {
      cur.push_back(c);
      in_token = true;
    }
  }
  if (quote != 0) {
    throw Error(ErrorCode::kInvalidArgument, "unterminated quote in command line");
  }
  if (in_token) out.push_back(std::move(cur));
  return out;
}

ExternalCommandWorkload::ExternalCommandWorkload(std::string id, Variant variant,
                                                 std::vector<std::string> argv,
                                                 Taxonomy taxonomy, bool quiet)
    : id_(std::move(id)),
      variant_(variant),
      argv_(std::move(argv)),
      taxonomy_(std::move(taxonomy)),
      quiet_(quiet) {
  if (argv_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty command");
}

void ExternalCommandWorkload::run_once() {
  std::vector<char*> args;
  args.reserve(argv_.size() + 1);
  for (auto& a : argv_) args.push_back(a.data());
  args.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  if (quiet_) {
    posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);
  }
  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw Error(ErrorCode::kSpawnFailure, argv_[0] + ": " + std::strerror(rc));
  }
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) {
      throw Error(ErrorCode::kSpawnFailure, argv_[0] + ": waitpid: " + std::strerror(errno));
    }
  }
  if (WIFEXITED(status)) {
    // posix_spawnp may report a missing program through the child's 127.
    if (WEXITSTATUS(status) == 127) {
      throw Error(ErrorCode::kSpawnFailure, argv_[0] + ": command not found");
    }
    if (WEXITSTATUS(status) != 0) {
      throw Error(ErrorCode::kNonZeroExit,
                  argv_[0] + " exited with status " + std::to_string(WEXITSTATUS(status)));
    }
  } else {
    throw Error(ErrorCode::kNonZeroExit, argv_[0] + " terminated by a signal");
  }
}

ExternalResult run_external(const std::vector<std::string>& argv, std::size_t iterations,
                            meter::Meter& meter, const carbon::CarbonIntensity& intensity,
                            std::size_t warmup) {
  if (iterations < 1) throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 1");
  ExternalCommandWorkload cmd("external", Variant::kPrivate, argv);
  meter::Sampler sampler(meter, std::chrono::milliseconds(meter.config().interval_ms));
  try {
    sampler.launch();
  } catch (const Error& e) {
    throw Error(ErrorCode::kMeterFailure, e.what());
  }
  auto run = [&]() {
    try {
      return measure_run(cmd, sampler, meter);
    } catch (const WorkloadFailure& e) {
      // Surface the spawn/exit classification rather than the generic wrapper.
      if (e.cause()) throw Error(*e.cause(), e.what());
      throw;
    }
  };
  for (std::size_t i = 0; i < warmup; ++i) run();
  ExternalResult out;
  out.intensity = intensity;
  for (std::size_t i = 0; i < iterations; ++i) {
    auto rec = run();
    rec.run_index = i;
    rec.sequence = i;
    out.runs.push_back(std::move(rec));
  }
  sampler.halt();
  out.stats = aggregate_stats(out.runs);
  out.mean_emissions_g = carbon::emissions(out.stats.mean_kwh, intensity);
  return out;
}

}  // namespace petcarbon::harness

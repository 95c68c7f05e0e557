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
#include <filesystem>
#include <string>
#include <vector>

#include "petcarbon/common/bytes.hpp"

namespace petcarbon::email {

struct EmailCorpus {
  std::vector<Bytes> messages;
  std::filesystem::path source;

  std::size_t size() const { return messages.size(); }
};

/// Every regular file under `dir` (recursively, sorted by path) is one
/// message. Empty files and dot-files are skipped. IoError when `dir` is not a
/// readable directory, EmptyCorpus when nothing is left.
EmailCorpus load_corpus(const std::filesystem::path& dir);

/// Deterministic synthetic emails (headers plus prose-like body, 200 B to
/// a few KB). Same seed, same messages on every platform.
std::vector<std::string> generate_synthetic_corpus(std::size_t count, std::uint64_t seed);

/// Writes messages as msg_NNNN.txt; creates `dir` if needed.
void write_corpus(const std::filesystem::path& dir, const std::vector<std::string>& messages);

inline constexpr std::size_t kBundledCorpusSize = 200;
inline constexpr std::uint64_t kBundledCorpusSeed = 20240601;

}  // namespace petcarbon::email

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

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>

#include "petcarbon/common/bytes.hpp"
#include "petcarbon/email/corpus.hpp"
#include "petcarbon/harness/workload.hpp"

namespace petcarbon::edb {

/// Database sizes (documents) of the encrypted-query sweep.
inline constexpr std::array<std::size_t, 3> kDbSizeSweep{50, 200, 1000};

struct EdbOptions {
  std::size_t queries_per_run = 1;
  std::uint64_t query_seed = 7;
  std::optional<Bytes> master_key;  // random when unset
};

/// Both variants query keywords drawn uniformly from the sorted vocabulary by a
/// splitmix64 stream seeded with query_seed, so the sequences are identical.
/// PRIVATE: trapdoor + encrypted lookup + decrypt. PLAINTEXT: map lookup.
/// Indexes are built in setup(). Taxonomy COMPUTATIONAL. Id edb-n<docs>.
harness::WorkloadPair edb_suite_workloads(std::shared_ptr<const email::EmailCorpus> corpus,
                                          const EdbOptions& options = {});

/// Order-sensitive digest of every result set returned so far, exposed by both
/// variants for equivalence checks.
class QueryDigest {
 public:
  virtual ~QueryDigest() = default;
  virtual std::uint64_t digest() const = 0;
  virtual std::size_t queries() const = 0;
};

}  // namespace petcarbon::edb

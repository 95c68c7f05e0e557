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

#include "petcarbon/edb/workloads.hpp"

#include <string>

#include "petcarbon/common/error.hpp"
#include "petcarbon/common/random.hpp"
#include "petcarbon/common/splitmix.hpp"
#include "petcarbon/edb/index.hpp"

namespace petcarbon::edb {

namespace {

using harness::Overhead;
using harness::Variant;

// FNV-1a over (query number, ids).
class Digest {
 public:
  void add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xff;
      h_ *= 0x100000001b3ull;
    }
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

class QueryStream {
 public:
  explicit QueryStream(std::uint64_t seed) : rng_(seed) {}
  const std::string& next(const std::vector<std::string>& vocab) {
    return vocab[rng_.below(vocab.size())];
  }

 private:
  SplitMix64 rng_;
};

class EdbWorkload : public harness::Workload, public QueryDigest {
 public:
  EdbWorkload(std::string id, std::shared_ptr<const email::EmailCorpus> corpus,
              const EdbOptions& options)
      : id_(std::move(id)), corpus_(std::move(corpus)), options_(options), stream_(options.query_seed) {}

  std::string id() const override { return id_; }
  harness::Taxonomy taxonomy() const override { return {Overhead::kComputational}; }
  std::uint64_t digest() const override { return digest_.value(); }
  std::size_t queries() const override { return queries_; }

 protected:
  void record(const Postings& ids) {
    digest_.add(queries_++);
    for (DocId d : ids) digest_.add(d);
  }

  std::string id_;
  std::shared_ptr<const email::EmailCorpus> corpus_;
  EdbOptions options_;
  QueryStream stream_;
  std::vector<std::string> vocab_;

 private:
  Digest digest_;
  std::size_t queries_ = 0;
};

class EncryptedQueries final : public EdbWorkload {
 public:
  using EdbWorkload::EdbWorkload;
  Variant variant() const override { return Variant::kPrivate; }

  void setup() override {
    if (!vocab_.empty()) return;
    const auto plain = build_plain_index(*corpus_);
    vocab_ = plain.vocabulary();
    const Bytes master = options_.master_key ? *options_.master_key : system_random().bytes(kMasterKeySize);
    keys_ = derive_sse_keys(master);
    index_ = sse_setup(plain, keys_);
  }

  void run_once() override {
    for (std::size_t q = 0; q < options_.queries_per_run; ++q) {
      const auto t = sse_trapdoor(stream_.next(vocab_), keys_);
      record(sse_search(index_, t));
    }
  }

 private:
  SseKeys keys_;
  EncryptedIndex index_;
};

class PlainQueries final : public EdbWorkload {
 public:
  using EdbWorkload::EdbWorkload;
  Variant variant() const override { return Variant::kPlaintext; }

  void setup() override {
    if (!vocab_.empty()) return;
    index_ = build_plain_index(*corpus_);
    vocab_ = index_.vocabulary();
  }

  void run_once() override {
    for (std::size_t q = 0; q < options_.queries_per_run; ++q) {
      record(index_.lookup(stream_.next(vocab_)));
    }
  }

 private:
  PlainIndex index_;
};

}  // namespace

harness::WorkloadPair edb_suite_workloads(std::shared_ptr<const email::EmailCorpus> corpus,
                                          const EdbOptions& options) {
  if (!corpus || corpus->messages.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "edb workloads need a non-empty corpus");
  }
  if (options.queries_per_run == 0) {
    throw Error(ErrorCode::kInvalidArgument, "queries_per_run must be >= 1");
  }
  if (options.master_key && options.master_key->size() != kMasterKeySize) {
    throw Error(ErrorCode::kInvalidArgument, "master key must be 32 bytes");
  }
  const std::string id = "edb-n" + std::to_string(corpus->size());
  harness::WorkloadPair pair;
  pair.private_variant = std::make_unique<EncryptedQueries>(id, corpus, options);
  pair.baseline = std::make_unique<PlainQueries>(id, std::move(corpus), options);
  return pair;
}

}  // namespace petcarbon::edb

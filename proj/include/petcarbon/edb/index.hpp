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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "petcarbon/common/bytes.hpp"
#include "petcarbon/email/corpus.hpp"

namespace petcarbon::edb {

using DocId = std::uint32_t;
using Postings = std::vector<DocId>;

inline constexpr std::size_t kMinTokenLength = 3;

/// ASCII-lowercased runs of [a-z0-9] of length >= 3, in order of appearance,
/// duplicates kept. Every other byte separates.
std::vector<std::string> tokenize(std::string_view text);

struct PlainIndex {
  std::unordered_map<std::string, Postings> postings;  // ids ascending
  std::size_t doc_count = 0;

  /// Empty for an unknown keyword. The keyword is lowercased first.
  const Postings& lookup(std::string_view keyword) const;
  /// Sorted keywords.
  std::vector<std::string> vocabulary() const;
};

/// Doc id = position in the corpus. EmptyCorpus for an empty corpus.
PlainIndex build_plain_index(const email::EmailCorpus& corpus);

inline constexpr std::size_t kMasterKeySize = 32;
inline constexpr std::size_t kSearchTokenSize = 32;

/// k1 derives search tokens, k2 per-keyword payload keys. Both are
/// HMAC-SHA256(master, label).
struct SseKeys {
  Bytes token_key;
  Bytes payload_key;
};

/// InvalidArgument unless the master key is 32 bytes.
SseKeys derive_sse_keys(ByteView master_key);

struct SearchToken {
  Bytes token;        // PRF(k1, w), table address
  Bytes payload_key;  // PRF(k2, w), opens that one blob
};

/// token -> nonce || AES-256-GCM(k_w, postings, aad = token)
struct EncryptedIndex {
  std::unordered_map<std::string, Bytes> table;
  std::size_t doc_count = 0;
};

/// One blob per keyword. The nonce is derived from (k_w, w), so the same key and
/// corpus give a byte-identical table; each k_w seals exactly one message.
EncryptedIndex sse_setup(const email::EmailCorpus& corpus, ByteView master_key);
EncryptedIndex sse_setup(const PlainIndex& plain, const SseKeys& keys);

SearchToken sse_trapdoor(std::string_view keyword, ByteView master_key);
SearchToken sse_trapdoor(std::string_view keyword, const SseKeys& keys);

/// Ids for the token, ascending; empty for an unknown token. AuthFailure when
/// the blob does not authenticate under the token's key.
Postings sse_search(const EncryptedIndex& index, const SearchToken& token);

/// Prefix of the corpus when it is large enough; otherwise padded with messages
/// from the synthetic generator at the bundled seed (positions size()..n-1), so
/// the bundled corpus grows into the same 1000-message corpus every time.
email::EmailCorpus corpus_of_size(const email::EmailCorpus& corpus, std::size_t n);

}  // namespace petcarbon::edb

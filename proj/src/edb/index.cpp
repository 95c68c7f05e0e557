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

#include "petcarbon/edb/index.hpp"

#include <algorithm>

#include "petcarbon/common/error.hpp"
#include "petcarbon/common/symmetric.hpp"

namespace petcarbon::edb {

namespace {

constexpr std::string_view kTokenLabel = "petcarbon-sse token key";
constexpr std::string_view kPayloadLabel = "petcarbon-sse payload key";
constexpr std::string_view kNonceLabel = "petcarbon-sse nonce";

bool is_word_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

Bytes serialize(const Postings& ids) {
  Bytes out;
  out.reserve(ids.size() * 4);
  for (DocId id : ids) {
    out.push_back(static_cast<std::uint8_t>(id >> 24));
    out.push_back(static_cast<std::uint8_t>(id >> 16));
    out.push_back(static_cast<std::uint8_t>(id >> 8));
    out.push_back(static_cast<std::uint8_t>(id));
  }
  return out;
}

Postings deserialize(ByteView b) {
  if (b.size() % 4 != 0) throw Error(ErrorCode::kAuthFailure, "posting blob has a partial id");
  Postings out(b.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = DocId{b[4 * i]} << 24 | DocId{b[4 * i + 1]} << 16 | DocId{b[4 * i + 2]} << 8 |
             DocId{b[4 * i + 3]};
  }
  return out;
}

std::string key_of(ByteView token) { return std::string(token.begin(), token.end()); }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_char(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && is_word_char(static_cast<unsigned char>(text[i]))) ++i;
    if (i - start >= kMinTokenLength) out.push_back(lower(text.substr(start, i - start)));
  }
  return out;
}

const Postings& PlainIndex::lookup(std::string_view keyword) const {
  static const Postings kEmpty;
  const auto it = postings.find(lower(keyword));
  return it == postings.end() ? kEmpty : it->second;
}

std::vector<std::string> PlainIndex::vocabulary() const {
  std::vector<std::string> out;
  out.reserve(postings.size());
  for (const auto& [k, v] : postings) out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

PlainIndex build_plain_index(const email::EmailCorpus& corpus) {
  if (corpus.messages.empty()) throw Error(ErrorCode::kEmptyCorpus, "cannot index an empty corpus");
  PlainIndex idx;
  idx.doc_count = corpus.size();
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& msg = corpus.messages[d];
    const std::string_view text(reinterpret_cast<const char*>(msg.data()), msg.size());
    for (auto& w : tokenize(text)) {
      auto& list = idx.postings[std::move(w)];
      // Docs are visited in order, so a repeat can only be at the back.
      if (list.empty() || list.back() != d) list.push_back(static_cast<DocId>(d));
    }
  }
  return idx;
}

SseKeys derive_sse_keys(ByteView master_key) {
  if (master_key.size() != kMasterKeySize) {
    throw Error(ErrorCode::kInvalidArgument, "master key must be 32 bytes");
  }
  return {sym::hmac_sha256(master_key, as_bytes(kTokenLabel)),
          sym::hmac_sha256(master_key, as_bytes(kPayloadLabel))};
}

SearchToken sse_trapdoor(std::string_view keyword, const SseKeys& keys) {
  const auto w = lower(keyword);
  return {sym::hmac_sha256(keys.token_key, as_bytes(w)),
          sym::hmac_sha256(keys.payload_key, as_bytes(w))};
}

SearchToken sse_trapdoor(std::string_view keyword, ByteView master_key) {
  return sse_trapdoor(keyword, derive_sse_keys(master_key));
}

EncryptedIndex sse_setup(const PlainIndex& plain, const SseKeys& keys) {
  EncryptedIndex out;
  out.doc_count = plain.doc_count;
  out.table.reserve(plain.postings.size());
  for (const auto& [w, ids] : plain.postings) {
    const auto t = sse_trapdoor(w, keys);
    Bytes nonce_input = to_bytes(kNonceLabel);
    nonce_input.insert(nonce_input.end(), w.begin(), w.end());
    Bytes blob = sym::hmac_sha256(t.payload_key, nonce_input);
    blob.resize(sym::kNonceSize);
    const auto sealed = sym::aes_gcm_seal(t.payload_key, blob, serialize(ids), t.token);
    blob.insert(blob.end(), sealed.begin(), sealed.end());
    out.table.emplace(key_of(t.token), std::move(blob));
  }
  return out;
}

EncryptedIndex sse_setup(const email::EmailCorpus& corpus, ByteView master_key) {
  return sse_setup(build_plain_index(corpus), derive_sse_keys(master_key));
}

Postings sse_search(const EncryptedIndex& index, const SearchToken& token) {
  const auto it = index.table.find(key_of(token.token));
  if (it == index.table.end()) return {};
  const ByteView blob = it->second;
  if (blob.size() < sym::kNonceSize + sym::kTagSize) {
    throw Error(ErrorCode::kAuthFailure, "posting blob truncated");
  }
  const auto plain = sym::aes_gcm_open(token.payload_key, blob.first(sym::kNonceSize),
                                       blob.subspan(sym::kNonceSize), token.token);
  if (!plain) throw Error(ErrorCode::kAuthFailure, "posting blob failed authentication");
  return deserialize(*plain);
}

email::EmailCorpus corpus_of_size(const email::EmailCorpus& corpus, std::size_t n) {
  email::EmailCorpus out;
  out.source = corpus.source;
  const std::size_t keep = std::min(n, corpus.size());
  out.messages.assign(corpus.messages.begin(),
                      corpus.messages.begin() + static_cast<std::ptrdiff_t>(keep));
  if (keep < n) {
    auto extra = email::generate_synthetic_corpus(n, email::kBundledCorpusSeed);
    for (std::size_t i = keep; i < n; ++i) out.messages.push_back(to_bytes(extra[i]));
  }
  return out;
}

}  // namespace petcarbon::edb

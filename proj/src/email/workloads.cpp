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

#include "petcarbon/email/workloads.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "petcarbon/common/error.hpp"

namespace petcarbon::email {

std::string_view to_string(CryptoOp op) {
  switch (op) {
    case CryptoOp::kEncrypt: return "encrypt";
    case CryptoOp::kSign: return "sign";
    case CryptoOp::kEncryptAndSign: return "both";
  }
  return "?";
}

CryptoOp parse_crypto_op(std::string_view s) {
  if (s == "encrypt") return CryptoOp::kEncrypt;
  if (s == "sign") return CryptoOp::kSign;
  if (s == "both") return CryptoOp::kEncryptAndSign;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown crypto op '" + std::string(s) + "' (expected encrypt, sign or both)");
}

namespace {

using harness::Overhead;
using harness::Variant;

std::string suite_slug(CipherSuite s) {
  std::string out(to_string(s));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

class CryptoWorkload final : public harness::Workload {
 public:
  CryptoWorkload(std::string id, std::shared_ptr<const EmailCorpus> corpus, CipherSuite suite,
                 CryptoOp op, std::optional<std::uint64_t> seed)
      : id_(std::move(id)), corpus_(std::move(corpus)), suite_(suite), op_(op), seed_(seed) {}

  std::string id() const override { return id_; }
  Variant variant() const override { return Variant::kPrivate; }
  harness::Taxonomy taxonomy() const override { return {Overhead::kComputational}; }

  void setup() override {
    if (!keys_) keys_ = std::make_unique<KeyPairSet>(keygen(suite_, seed_));
  }

  void run_once() override {
    const auto& msg = corpus_->messages[next_++ % corpus_->size()];
    const auto& pub = keys_->public_keys();
    bool ok = true;
    if (op_ != CryptoOp::kEncrypt) {
      const auto sig = sign_email(msg, *keys_);
      if (op_ == CryptoOp::kSign) {
        ok = verify_email(msg, sig, pub);
      } else {
        const auto ct = encrypt_email(msg, pub);
        const auto pt = decrypt_email(ct, *keys_);
        ok = pt == msg && verify_email(pt, sig, pub);
      }
    } else {
      const auto ct = encrypt_email(msg, pub);
      ok = decrypt_email(ct, *keys_) == msg;
    }
    if (!ok) throw Error(ErrorCode::kCryptoFailure, id_ + ": roundtrip check failed");
  }

 private:
  std::string id_;
  std::shared_ptr<const EmailCorpus> corpus_;
  CipherSuite suite_;
  CryptoOp op_;
  std::optional<std::uint64_t> seed_;
  std::unique_ptr<KeyPairSet> keys_;
  std::size_t next_ = 0;
};

class CopyWorkload final : public harness::Workload {
 public:
  CopyWorkload(std::string id, std::shared_ptr<const EmailCorpus> corpus)
      : id_(std::move(id)), corpus_(std::move(corpus)) {}

  std::string id() const override { return id_; }
  Variant variant() const override { return Variant::kPlaintext; }
  harness::Taxonomy taxonomy() const override { return {Overhead::kComputational}; }

  void run_once() override {
    const auto& msg = corpus_->messages[next_++ % corpus_->size()];
    sink_.assign(msg.begin(), msg.end());
    // Keep the copy observable.
    checksum_ = checksum_ + (sink_.empty() ? 0 : sink_.back());
  }

 private:
  std::string id_;
  std::shared_ptr<const EmailCorpus> corpus_;
  Bytes sink_;
  std::size_t next_ = 0;
  volatile std::uint64_t checksum_ = 0;
};

}  // namespace

harness::WorkloadPair crypto_suite_workloads(std::shared_ptr<const EmailCorpus> corpus,
                                             CipherSuite suite, CryptoOp op,
                                             std::optional<std::uint64_t> key_seed) {
  if (!corpus || corpus->messages.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "crypto workloads need a non-empty corpus");
  }
  const std::string id = "email-" + suite_slug(suite) + "-" + std::string(to_string(op));
  harness::WorkloadPair pair;
  pair.private_variant = std::make_unique<CryptoWorkload>(id, corpus, suite, op, key_seed);
  pair.baseline = std::make_unique<CopyWorkload>(id, std::move(corpus));
  return pair;
}

}  // namespace petcarbon::email

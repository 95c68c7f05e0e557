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

#include <memory>
#include <optional>
#include <string_view>

#include "petcarbon/email/cipher.hpp"
#include "petcarbon/email/corpus.hpp"
#include "petcarbon/harness/workload.hpp"

namespace petcarbon::email {

/// What one measured private run does with the next corpus message. Sender and
/// recipient run on the same host, so each op includes both ends.
enum class CryptoOp {
  kEncrypt,         // encrypt + decrypt
  kSign,            // sign + verify
  kEncryptAndSign,  // sign + encrypt, then decrypt + verify
};

std::string_view to_string(CryptoOp op);
CryptoOp parse_crypto_op(std::string_view s);

/// PRIVATE: `op` on messages taken round-robin; keys generated in setup().
/// PLAINTEXT: copies the message bytes (no encryption). Taxonomy COMPUTATIONAL.
/// Workload id: email-<suite>-<op>.
harness::WorkloadPair crypto_suite_workloads(std::shared_ptr<const EmailCorpus> corpus,
                                             CipherSuite suite,
                                             CryptoOp op = CryptoOp::kEncryptAndSign,
                                             std::optional<std::uint64_t> key_seed = std::nullopt);

}  // namespace petcarbon::email

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
#include <optional>

#include "petcarbon/common/bytes.hpp"

// Thin wrappers over OpenSSL's hash, MAC and AEAD primitives.
namespace petcarbon::sym {

inline constexpr std::size_t kKeySize = 32;
inline constexpr std::size_t kNonceSize = 12;
inline constexpr std::size_t kTagSize = 16;

Bytes sha256(ByteView data);
Bytes hmac_sha256(ByteView key, ByteView data);
Bytes hkdf_sha256(ByteView ikm, ByteView salt, ByteView info, std::size_t length);

/// AES-256-GCM. Output is ciphertext followed by the 16-byte tag.
Bytes aes_gcm_seal(ByteView key, ByteView nonce, ByteView plaintext, ByteView aad = {});

/// Returns nullopt when the tag does not verify.
std::optional<Bytes> aes_gcm_open(ByteView key, ByteView nonce, ByteView sealed,
                                  ByteView aad = {});

}  // namespace petcarbon::sym

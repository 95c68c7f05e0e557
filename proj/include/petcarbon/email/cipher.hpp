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
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "petcarbon/common/bytes.hpp"

namespace petcarbon::email {

/// Hybrid email protection suites, all at 128-bit security.
///   RSA:          RSA-3072 OAEP key wrap, RSA-3072 PKCS#1 v1.5 signatures.
///   ECC:          ECIES over P-256 (ECDH + HKDF-SHA256), ECDSA P-256.
///   ELGAMAL_DSA:  ElGamal over the 3072-bit MODP group, DSA (3072, 256).
/// Bodies are always AES-256-GCM under a fresh session key; no compression.
enum class CipherSuite { kRsa, kEcc, kElGamalDsa };

std::string_view to_string(CipherSuite s);
/// Accepts rsa, ecc, elgamal (case-insensitive) and the enum spellings.
CipherSuite parse_cipher_suite(std::string_view s);

struct SuiteParams {
  int enc_bits;        // RSA modulus, curve order, or ElGamal group size
  int sig_bits;        // RSA modulus, curve order, or DSA p
  int sig_subgroup_bits;  // DSA q; 0 otherwise
};
SuiteParams suite_params(CipherSuite s);

namespace detail {
struct PublicImpl;
struct PrivateImpl;
}  // namespace detail

/// Recipient encryption key and sender verification key.
class PublicKeySet {
 public:
  CipherSuite suite() const;
  /// Bit length of the encryption and signature public parameters as built.
  int enc_bits() const;
  int sig_bits() const;
  /// SHA-256 over the serialized public components.
  Bytes fingerprint() const;

  const detail::PublicImpl& impl() const { return *impl_; }
  explicit PublicKeySet(std::shared_ptr<const detail::PublicImpl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const detail::PublicImpl> impl_;
};

/// Encryption key pair plus signing key pair of one suite.
class KeyPairSet {
 public:
  CipherSuite suite() const { return public_keys_.suite(); }
  const PublicKeySet& public_keys() const { return public_keys_; }

  const detail::PrivateImpl& impl() const { return *impl_; }
  KeyPairSet(PublicKeySet pub, std::shared_ptr<const detail::PrivateImpl> priv)
      : public_keys_(std::move(pub)), impl_(std::move(priv)) {}

 private:
  PublicKeySet public_keys_;
  std::shared_ptr<const detail::PrivateImpl> impl_;
};

/// Fresh keys. With a seed every key component is derived from a seeded
/// stream, so equal seeds give identical keys (tests only).
KeyPairSet keygen(CipherSuite suite, std::optional<std::uint64_t> seed = std::nullopt);

struct HybridCiphertext {
  CipherSuite suite = CipherSuite::kRsa;
  Bytes wrapped_key;  // asymmetric envelope around the session key
  Bytes nonce;        // 12 bytes
  Bytes body;         // AES-256-GCM ciphertext || 16-byte tag

  /// Serialized length: 1 suite byte + envelope + nonce + body.
  std::size_t size() const { return 1 + wrapped_key.size() + nonce.size() + body.size(); }
};

struct Signature {
  CipherSuite suite = CipherSuite::kRsa;
  Bytes bytes;
};

/// size() - |message| for this suite's ciphertexts.
std::size_t envelope_overhead(CipherSuite suite);

/// InvalidMessage on an empty message.
HybridCiphertext encrypt_email(ByteView message, const PublicKeySet& recipient);
/// KeyMismatch across suites; AuthFailure when the envelope or body does not
/// open under these keys.
Bytes decrypt_email(const HybridCiphertext& ct, const KeyPairSet& recipient);

Signature sign_email(ByteView message, const KeyPairSet& sender);
/// False on any altered message or signature byte. KeyMismatch across suites.
bool verify_email(ByteView message, const Signature& sig, const PublicKeySet& sender);

}  // namespace petcarbon::email

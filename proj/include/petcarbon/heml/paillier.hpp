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

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "petcarbon/common/random.hpp"
#include "petcarbon/heml/model.hpp"

namespace petcarbon::heml {

/// Paillier: plaintexts in Z_n, ciphertexts in Z*_{n^2}, g = n + 1.
struct AhePublicKey {
  mpz_class n;
  mpz_class n_squared;
  mpz_class g;

  std::size_t bits() const { return mpz_sizeinbase(n.get_mpz_t(), 2); }

  /// Public key for an externally supplied modulus. Only checks that n is odd
  /// and > 1; keygen is where the size floor is enforced.
  static AhePublicKey from_modulus(const mpz_class& n);
};

struct AhePrivateKey {
  mpz_class p, q;
  mpz_class p_squared, q_squared;
  mpz_class hp, hq;   // L_p(g^(p-1) mod p^2)^-1 mod p, same for q
  mpz_class q_inv_p;  // q^-1 mod p
};

struct AheKeyPair {
  AhePublicKey pub;
  AhePrivateKey priv;
};

struct AheCiphertext {
  mpz_class value;
  bool operator==(const AheCiphertext&) const = default;
};

inline constexpr std::size_t kMinAheBits = 2048;

/// n = p*q with p, q distinct primes of bits/2 bits each. bits must be even and
/// >= 2048 (InvalidArgument otherwise). A seed makes the key reproducible.
AheKeyPair ahe_keygen(std::size_t bits = kMinAheBits,
                      std::optional<std::uint64_t> seed = std::nullopt);

/// Key pair from known distinct odd primes (import path; no size floor).
/// InvalidArgument if gcd(pq, (p-1)(q-1)) != 1.
AheKeyPair ahe_keypair_from_primes(const mpz_class& p, const mpz_class& q);

/// Requires 0 <= m < n (InvalidArgument).
AheCiphertext ahe_encrypt(const AhePublicKey& pub, const mpz_class& m,
                          RandomSource& rng = system_random());

/// InvalidCiphertext unless 0 < c < n^2 and gcd(c, n) = 1.
mpz_class ahe_decrypt(const AheKeyPair& keys, const AheCiphertext& c);

/// Dec = a + b mod n.
AheCiphertext ahe_add(const AhePublicKey& pub, const AheCiphertext& a, const AheCiphertext& b);
/// Dec = a + k mod n, any integer k.
AheCiphertext ahe_add_plain(const AhePublicKey& pub, const AheCiphertext& a, const mpz_class& k);
/// Dec = k * a mod n, any integer k. Negative k goes through c^-1 so the
/// exponent stays |k|.
AheCiphertext ahe_scalar_mul(const AhePublicKey& pub, const AheCiphertext& a, const mpz_class& k);

void validate_ciphertext(const AhePublicKey& pub, const AheCiphertext& c);

/// Signed integers map to v mod n; decode maps [0, n) back to (-n/2, n/2].
mpz_class encode_signed(const AhePublicKey& pub, const mpz_class& v);
mpz_class decode_signed(const AhePublicKey& pub, const mpz_class& m);

std::vector<AheCiphertext> encrypt_features(const AhePublicKey& pub,
                                            std::span<const std::int64_t> x,
                                            RandomSource& rng = system_random());

/// Encrypted score Enc(sum(w_i * x_i) + int_bias * 2^scale). InvalidArgument if
/// x.size() != d. Overflow if the largest score reachable with |x_i| < 2^31
/// could reach n/2, where recentering would wrap.
AheCiphertext he_inference(const AhePublicKey& pub, std::span<const AheCiphertext> x,
                           const QuantizedLinearModel& model);

/// Decrypts and recenters.
mpz_class decrypt_score(const AheKeyPair& keys, const AheCiphertext& score);

}  // namespace petcarbon::heml

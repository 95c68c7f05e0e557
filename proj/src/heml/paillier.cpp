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

#include "petcarbon/heml/paillier.hpp"

#include <string>

#include "petcarbon/common/error.hpp"

namespace petcarbon::heml {

namespace {

constexpr int kPrimeReps = 40;

mpz_class from_bytes(const Bytes& b) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
  return out;
}

// Uniform in [0, bound) up to a 2^-64 bias.
mpz_class random_below(const mpz_class& bound, RandomSource& rng) {
  const auto len = (mpz_sizeinbase(bound.get_mpz_t(), 2) + 7) / 8 + 8;
  mpz_class r = from_bytes(rng.bytes(len));
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), bound.get_mpz_t());
  return r;
}

mpz_class random_prime(std::size_t bits, RandomSource& rng) {
  for (;;) {
    mpz_class c = from_bytes(rng.bytes((bits + 7) / 8));
    mpz_fdiv_r_2exp(c.get_mpz_t(), c.get_mpz_t(), bits);
    // Top two bits set so the product of two such primes has exactly 2*bits bits.
    mpz_setbit(c.get_mpz_t(), bits - 1);
    mpz_setbit(c.get_mpz_t(), bits - 2);
    mpz_setbit(c.get_mpz_t(), 0);
    mpz_nextprime(c.get_mpz_t(), c.get_mpz_t());
    if (mpz_sizeinbase(c.get_mpz_t(), 2) != bits) continue;
    if (mpz_probab_prime_p(c.get_mpz_t(), kPrimeReps) == 0) continue;
    return c;
  }
}

mpz_class invert(const mpz_class& a, const mpz_class& m) {
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error(ErrorCode::kCryptoFailure, "value not invertible");
  }
  return out;
}

mpz_class mod(const mpz_class& a, const mpz_class& m) {
  mpz_class out;
  mpz_mod(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return out;
}

// L_p(u) = (u - 1) / p, then times h mod p. Exponent p-1 is secret.
mpz_class crt_half(const mpz_class& c, const mpz_class& p, const mpz_class& p_squared,
                   const mpz_class& h) {
  const mpz_class base = mod(c, p_squared);
  const mpz_class e = p - 1;
  mpz_class u;
  mpz_powm_sec(u.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), p_squared.get_mpz_t());
  mpz_class l = (u - 1) / p;
  return mod(l * h, p);
}

mpz_class h_for(const mpz_class& g, const mpz_class& p, const mpz_class& p_squared) {
  mpz_class u;
  const mpz_class e = p - 1;
  mpz_powm(u.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t(), p_squared.get_mpz_t());
  return invert((u - 1) / p, p);
}

}  // namespace

AhePublicKey AhePublicKey::from_modulus(const mpz_class& n) {
  if (n <= 1 || mpz_even_p(n.get_mpz_t())) {
    throw Error(ErrorCode::kInvalidArgument, "modulus must be odd and > 1");
  }
  return {n, n * n, n + 1};
}

AheKeyPair ahe_keygen(std::size_t bits, std::optional<std::uint64_t> seed) {
  if (bits < kMinAheBits || bits % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "modulus size " + std::to_string(bits) + " must be even and >= 2048");
  }
  std::optional<SeededRandom> seeded;
  if (seed) seeded.emplace(*seed);
  RandomSource& rng = seeded ? static_cast<RandomSource&>(*seeded) : system_random();

  for (;;) {
    mpz_class p = random_prime(bits / 2, rng);
    mpz_class q = random_prime(bits / 2, rng);
    if (p == q) continue;
    try {
      return ahe_keypair_from_primes(p, q);
    } catch (const Error&) {
      // gcd(n, phi) != 1; draw again
    }
  }
}

AheKeyPair ahe_keypair_from_primes(const mpz_class& p, const mpz_class& q) {
  if (p == q || p < 3 || q < 3 || mpz_even_p(p.get_mpz_t()) || mpz_even_p(q.get_mpz_t())) {
    throw Error(ErrorCode::kInvalidArgument, "need distinct odd primes");
  }
  const mpz_class n = p * q;
  const mpz_class phi = (p - 1) * (q - 1);
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
  if (g != 1) throw Error(ErrorCode::kInvalidArgument, "gcd(n, phi(n)) != 1");

  AheKeyPair kp;
  kp.pub = AhePublicKey::from_modulus(n);
  kp.priv.p = p;
  kp.priv.q = q;
  kp.priv.p_squared = p * p;
  kp.priv.q_squared = q * q;
  kp.priv.hp = h_for(kp.pub.g, p, kp.priv.p_squared);
  kp.priv.hq = h_for(kp.pub.g, q, kp.priv.q_squared);
  kp.priv.q_inv_p = invert(q, p);
  return kp;
}

void validate_ciphertext(const AhePublicKey& pub, const AheCiphertext& c) {
  if (c.value <= 0 || c.value >= pub.n_squared) {
    throw Error(ErrorCode::kInvalidCiphertext, "ciphertext outside (0, n^2)");
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), c.value.get_mpz_t(), pub.n.get_mpz_t());
  if (g != 1) throw Error(ErrorCode::kInvalidCiphertext, "ciphertext shares a factor with n");
}

AheCiphertext ahe_encrypt(const AhePublicKey& pub, const mpz_class& m, RandomSource& rng) {
  if (m < 0 || m >= pub.n) throw Error(ErrorCode::kInvalidArgument, "plaintext outside [0, n)");
  mpz_class r, g;
  do {
    r = random_below(pub.n, rng);
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pub.n.get_mpz_t());
  } while (r == 0 || g != 1);
  mpz_class rn;
  mpz_powm(rn.get_mpz_t(), r.get_mpz_t(), pub.n.get_mpz_t(), pub.n_squared.get_mpz_t());
  // g^m = 1 + m*n mod n^2 for g = n + 1.
  return {mod((1 + m * pub.n) * rn, pub.n_squared)};
}

mpz_class ahe_decrypt(const AheKeyPair& keys, const AheCiphertext& c) {
  validate_ciphertext(keys.pub, c);
  const auto& k = keys.priv;
  const mpz_class mp = crt_half(c.value, k.p, k.p_squared, k.hp);
  const mpz_class mq = crt_half(c.value, k.q, k.q_squared, k.hq);
  return mq + k.q * mod((mp - mq) * k.q_inv_p, k.p);
}

AheCiphertext ahe_add(const AhePublicKey& pub, const AheCiphertext& a, const AheCiphertext& b) {
  validate_ciphertext(pub, a);
  validate_ciphertext(pub, b);
  return {mod(a.value * b.value, pub.n_squared)};
}

AheCiphertext ahe_add_plain(const AhePublicKey& pub, const AheCiphertext& a, const mpz_class& k) {
  validate_ciphertext(pub, a);
  return {mod(a.value * (1 + mod(k, pub.n) * pub.n), pub.n_squared)};
}

AheCiphertext ahe_scalar_mul(const AhePublicKey& pub, const AheCiphertext& a, const mpz_class& k) {
  validate_ciphertext(pub, a);
  mpz_class base = a.value;
  mpz_class e = k;
  if (k < 0) {
    base = invert(a.value, pub.n_squared);
    e = -k;
  }
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), pub.n_squared.get_mpz_t());
  return {out};
}

mpz_class encode_signed(const AhePublicKey& pub, const mpz_class& v) { return mod(v, pub.n); }

mpz_class decode_signed(const AhePublicKey& pub, const mpz_class& m) {
  const mpz_class x = mod(m, pub.n);
  return 2 * x > pub.n ? x - pub.n : x;
}

std::vector<AheCiphertext> encrypt_features(const AhePublicKey& pub,
                                            std::span<const std::int64_t> x, RandomSource& rng) {
  std::vector<AheCiphertext> out;
  out.reserve(x.size());
  for (auto v : x) out.push_back(ahe_encrypt(pub, encode_signed(pub, mpz_class(static_cast<long>(v))), rng));
  return out;
}

AheCiphertext he_inference(const AhePublicKey& pub, std::span<const AheCiphertext> x,
                           const QuantizedLinearModel& model) {
  if (x.size() != model.dimension()) {
    throw Error(ErrorCode::kInvalidArgument, "encrypted vector length " + std::to_string(x.size()) +
                                                 " != model dimension " +
                                                 std::to_string(model.dimension()));
  }
  // Largest |score| reachable with |x_i| < 2^31.
  mpz_class bound = 0;
  for (auto w : model.int_weights) bound += abs(mpz_class(static_cast<long>(w)));
  bound *= kIntLimit - 1;
  mpz_class bias = static_cast<long>(model.int_bias);
  mpz_mul_2exp(bias.get_mpz_t(), bias.get_mpz_t(), static_cast<mp_bitcnt_t>(model.scale_bits));
  bound += abs(bias);
  if (2 * bound >= pub.n) {
    throw Error(ErrorCode::kOverflow, "score bound reaches n/2 for a " +
                                          std::to_string(pub.bits()) + "-bit modulus");
  }

  mpz_class acc = 1, term;
  for (std::size_t i = 0; i < x.size(); ++i) {
    validate_ciphertext(pub, x[i]);
    const auto w = model.int_weights[i];
    if (w == 0) continue;
    acc = mod(acc * ahe_scalar_mul(pub, x[i], mpz_class(static_cast<long>(w))).value,
              pub.n_squared);
  }
  return ahe_add_plain(pub, {acc}, bias);
}

mpz_class decrypt_score(const AheKeyPair& keys, const AheCiphertext& score) {
  return decode_signed(keys.pub, ahe_decrypt(keys, score));
}

}  // namespace petcarbon::heml

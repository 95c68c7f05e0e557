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

#include <openssl/err.h>
#include <openssl/hmac.h>
#include <openssl/kdf.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <array>
#include <climits>

#include "petcarbon/common/error.hpp"
#include "petcarbon/common/openssl_util.hpp"
#include "petcarbon/common/random.hpp"
#include "petcarbon/common/symmetric.hpp"

namespace petcarbon {

std::string to_hex(ByteView b) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(b.size() * 2);
  for (auto v : b) {
    out.push_back(kDigits[v >> 4]);
    out.push_back(kDigits[v & 0xF]);
  }
  return out;
}

namespace ossl {

void throw_last_error(const std::string& what) {
  std::string msg = what;
  unsigned long e;
  while ((e = ERR_get_error()) != 0) {
    std::array<char, 256> buf{};
    ERR_error_string_n(e, buf.data(), buf.size());
    msg += " [";
    msg += buf.data();
    msg += "]";
  }
  throw Error(ErrorCode::kCryptoFailure, msg);
}

Bignum bn_from_bytes(ByteView big_endian) {
  Bignum b(BN_bin2bn(big_endian.data(), static_cast<int>(big_endian.size()), nullptr));
  check(b != nullptr, "BN_bin2bn");
  return b;
}

Bignum bn_copy(const BIGNUM* a) {
  Bignum b(BN_dup(a));
  check(b != nullptr, "BN_dup");
  return b;
}

Bytes bn_to_fixed(const BIGNUM* a, std::size_t len) {
  Bytes out(len);
  check(BN_bn2binpad(a, out.data(), static_cast<int>(len)) == static_cast<int>(len),
        "BN_bn2binpad");
  return out;
}

Bignum random_below(const BIGNUM* bound, RandomSource& rng) {
  check(!BN_is_zero(bound) && !BN_is_negative(bound), "random_below: bound must be positive");
  const auto len = static_cast<std::size_t>(BN_num_bytes(bound)) + 8;
  const auto raw = rng.bytes(len);
  auto wide = bn_from_bytes(raw);
  auto out = new_bn();
  auto ctx = new_bn_ctx();
  check(BN_nnmod(out.get(), wide.get(), bound, ctx.get()) == 1, "BN_nnmod");
  return out;
}

Bignum random_range(const BIGNUM* lo, const BIGNUM* hi, RandomSource& rng) {
  auto span = new_bn();
  check(BN_sub(span.get(), hi, lo) == 1, "BN_sub");
  check(BN_add_word(span.get(), 1) == 1, "BN_add_word");
  auto r = random_below(span.get(), rng);
  check(BN_add(r.get(), r.get(), lo) == 1, "BN_add");
  return r;
}

}  // namespace ossl

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  ossl::check(RAND_bytes(out.data(), static_cast<int>(out.size())) == 1, "RAND_bytes");
}

SystemRandom& system_random() {
  static SystemRandom rng;
  return rng;
}

struct SeededRandom::Impl {
  ossl::CipherCtx ctx;
};

SeededRandom::SeededRandom(std::uint64_t seed) : impl_(std::make_unique<Impl>()) {
  std::array<std::uint8_t, 8> s{};
  for (int i = 0; i < 8; ++i) s[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  Bytes key = sym::sha256(s);
  std::array<std::uint8_t, 16> iv{};
  impl_->ctx.reset(EVP_CIPHER_CTX_new());
  ossl::check(impl_->ctx != nullptr, "EVP_CIPHER_CTX_new");
  ossl::check(EVP_EncryptInit_ex(impl_->ctx.get(), EVP_aes_256_ctr(), nullptr, key.data(),
                                 iv.data()) == 1,
              "EVP_EncryptInit_ex");
}

SeededRandom::~SeededRandom() = default;

void SeededRandom::fill(std::span<std::uint8_t> out) {
  std::fill(out.begin(), out.end(), 0);
  std::size_t done = 0;
  while (done < out.size()) {
    int chunk = static_cast<int>(std::min<std::size_t>(out.size() - done, INT_MAX / 2));
    int len = 0;
    ossl::check(EVP_EncryptUpdate(impl_->ctx.get(), out.data() + done, &len,
                                  out.data() + done, chunk) == 1,
                "EVP_EncryptUpdate");
    done += static_cast<std::size_t>(len);
  }
}

namespace sym {

Bytes sha256(ByteView data) {
  Bytes out(SHA256_DIGEST_LENGTH);
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Bytes hmac_sha256(ByteView key, ByteView data) {
  Bytes out(SHA256_DIGEST_LENGTH);
  unsigned int len = 0;
  ossl::check(HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(),
                   data.size(), out.data(), &len) != nullptr,
              "HMAC");
  out.resize(len);
  return out;
}

Bytes hkdf_sha256(ByteView ikm, ByteView salt, ByteView info, std::size_t length) {
  ossl::PKeyCtx ctx(EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr));
  ossl::check(ctx != nullptr, "EVP_PKEY_CTX_new_id(HKDF)");
  ossl::check(EVP_PKEY_derive_init(ctx.get()) == 1, "HKDF init");
  ossl::check(EVP_PKEY_CTX_set_hkdf_md(ctx.get(), EVP_sha256()) == 1, "HKDF md");
  ossl::check(EVP_PKEY_CTX_set1_hkdf_salt(ctx.get(), salt.data(),
                                          static_cast<int>(salt.size())) == 1,
              "HKDF salt");
  ossl::check(EVP_PKEY_CTX_set1_hkdf_key(ctx.get(), ikm.data(),
                                         static_cast<int>(ikm.size())) == 1,
              "HKDF key");
  ossl::check(EVP_PKEY_CTX_add1_hkdf_info(ctx.get(), info.data(),
                                          static_cast<int>(info.size())) == 1,
              "HKDF info");
  Bytes out(length);
  std::size_t out_len = length;
  ossl::check(EVP_PKEY_derive(ctx.get(), out.data(), &out_len) == 1, "HKDF derive");
  return out;
}

Bytes aes_gcm_seal(ByteView key, ByteView nonce, ByteView plaintext, ByteView aad) {
  if (key.size() != kKeySize || nonce.size() != kNonceSize) {
    throw Error(ErrorCode::kInvalidArgument, "aes_gcm_seal: bad key or nonce size");
  }
  ossl::CipherCtx ctx(EVP_CIPHER_CTX_new());
  ossl::check(ctx != nullptr, "EVP_CIPHER_CTX_new");
  ossl::check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                                 nonce.data()) == 1,
              "GCM init");
  int len = 0;
  if (!aad.empty()) {
    ossl::check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                                  static_cast<int>(aad.size())) == 1,
                "GCM aad");
  }
  Bytes out(plaintext.size() + kTagSize);
  ossl::check(EVP_EncryptUpdate(ctx.get(), out.data(), &len, plaintext.data(),
                                static_cast<int>(plaintext.size())) == 1,
              "GCM update");
  int fin = 0;
  ossl::check(EVP_EncryptFinal_ex(ctx.get(), out.data() + len, &fin) == 1, "GCM final");
  ossl::check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagSize,
                                  out.data() + plaintext.size()) == 1,
              "GCM tag");
  return out;
}

std::optional<Bytes> aes_gcm_open(ByteView key, ByteView nonce, ByteView sealed,
                                  ByteView aad) {
  if (key.size() != kKeySize || nonce.size() != kNonceSize) {
    throw Error(ErrorCode::kInvalidArgument, "aes_gcm_open: bad key or nonce size");
  }
  if (sealed.size() < kTagSize) return std::nullopt;
  const std::size_t ct_len = sealed.size() - kTagSize;
  ossl::CipherCtx ctx(EVP_CIPHER_CTX_new());
  ossl::check(ctx != nullptr, "EVP_CIPHER_CTX_new");
  ossl::check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                                 nonce.data()) == 1,
              "GCM init");
  int len = 0;
  if (!aad.empty()) {
    ossl::check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                                  static_cast<int>(aad.size())) == 1,
                "GCM aad");
  }
  Bytes out(ct_len);
  ossl::check(EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data(),
                                static_cast<int>(ct_len)) == 1,
              "GCM update");
  Bytes tag(sealed.begin() + static_cast<std::ptrdiff_t>(ct_len), sealed.end());
  ossl::check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagSize, tag.data()) == 1,
              "GCM set tag");
  int fin = 0;
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &fin) != 1) {
    ERR_clear_error();
    return std::nullopt;
  }
  return out;
}

}  // namespace sym
}  // namespace petcarbon

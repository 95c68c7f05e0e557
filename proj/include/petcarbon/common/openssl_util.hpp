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

#include <openssl/bn.h>
#include <openssl/evp.h>
#include <openssl/x509.h>

#include <memory>
#include <string>

#include "petcarbon/common/bytes.hpp"
#include "petcarbon/common/random.hpp"

namespace petcarbon::ossl {

template <auto Fn>
struct Deleter {
  template <typename T>
  void operator()(T* p) const noexcept {
    Fn(p);
  }
};

using PKey = std::unique_ptr<EVP_PKEY, Deleter<EVP_PKEY_free>>;
using PKeyCtx = std::unique_ptr<EVP_PKEY_CTX, Deleter<EVP_PKEY_CTX_free>>;
using MdCtx = std::unique_ptr<EVP_MD_CTX, Deleter<EVP_MD_CTX_free>>;
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, Deleter<EVP_CIPHER_CTX_free>>;
using Bignum = std::unique_ptr<BIGNUM, Deleter<BN_clear_free>>;
using BnCtx = std::unique_ptr<BN_CTX, Deleter<BN_CTX_free>>;
using X509Ptr = std::unique_ptr<X509, Deleter<X509_free>>;

/// Drains the OpenSSL error queue into a CryptoFailure.
[[noreturn]] void throw_last_error(const std::string& what);

inline void check(bool ok, const char* what) {
  if (!ok) throw_last_error(what);
}

inline Bignum new_bn() {
  Bignum b(BN_new());
  check(b != nullptr, "BN_new");
  return b;
}

inline BnCtx new_bn_ctx() {
  BnCtx c(BN_CTX_new());
  check(c != nullptr, "BN_CTX_new");
  return c;
}

Bignum bn_from_bytes(ByteView big_endian);
Bignum bn_copy(const BIGNUM* a);

/// Big-endian, left-padded to exactly `len` bytes. CryptoFailure if it does not fit.
Bytes bn_to_fixed(const BIGNUM* a, std::size_t len);

/// Uniform in [0, bound) drawn from `rng` (64 extra bits, then reduced).
Bignum random_below(const BIGNUM* bound, RandomSource& rng);

/// Uniform in [lo, hi].
Bignum random_range(const BIGNUM* lo, const BIGNUM* hi, RandomSource& rng);

}  // namespace petcarbon::ossl

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

#include "petcarbon/common/openssl_util.hpp"
#include "petcarbon/email/cipher.hpp"

namespace petcarbon::email {

// ElGamal over a safe-prime group: p = 2q + 1, g generates the order-q subgroup.
struct ElGamalGroup {
  ossl::Bignum p;
  ossl::Bignum q;
  ossl::Bignum g;
};

namespace detail {

struct PublicImpl {
  CipherSuite suite;
  ossl::PKey enc;  // RSA or EC; empty for ElGamal
  ossl::Bignum elgamal_y;
  ossl::PKey sig;  // RSA, EC or DSA
};

struct PrivateImpl {
  ossl::PKey enc;
  ossl::Bignum elgamal_x;
  ossl::PKey sig;
};

}  // namespace detail

/// RFC 3526 3072-bit MODP group, generator 2. Shared, immutable.
const ElGamalGroup& elgamal_group();

inline constexpr const char* kCurveName = "prime256v1";

}  // namespace petcarbon::email

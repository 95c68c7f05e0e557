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

#include <openssl/core_names.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>
#include <openssl/param_build.h>
#include <openssl/pem.h>

#include <algorithm>
#include <cctype>
#include <string>

#include "keys.hpp"
#include "petcarbon/common/error.hpp"
#include "petcarbon/common/symmetric.hpp"

namespace petcarbon::email {

using ossl::check;

namespace {

// Fixed DSA (3072, 256) domain parameters, generated once with OpenSSL.
constexpr const char* kDsaParamsPem = R"(-----BEGIN DSA PARAMETERS-----
MIIDLAKCAYEA7V7MBhoqxNX7iPr6QDf3u//fkGk72TpE1KsBCHOhDHN1P5E9NP3+
Efqk9+p2d+5LXaQwHKtdG6lXZR6gB8bMMoHDX/964dDH4Xo2QjWcMMf4pferFxxo
VuuOZ3+wOAzpnk82EdVO/iPKADgZGgR44HNp76SE0n46XOwQnhpmbGB/ve+1p7xK
Zc9J6Tk14xVsk4Wu/9nVZ5RwLjjxHfdTXTd6GXrN9Gg8FfuPo37puOBN0chceVOS
ugKnAf5Tco9hsqINmjDhDpGYQslJMdUqjlyuqKLICWZ6d/j9KFpcyWzF6e2RslgI
MRFQM+Cife/LbC6R1eJmlu2A7AfBFII/EsRNuNC+4laxhidI1Z2QClNN795clV3s
AltQ6aKEP9mOxmV5iM+Cn4/7PLBMVTw2Z67yss754S4iGhCSgKtNjR/RuT+fH7JH
C1SvuZL73DPH2NmM6qlzSJAayQ/B7oHZNlYv93baZWHQIc640T1027MYX0Di9KR4
hKjGFyQ9c4RxAiEA1MEjaabyD/Md3znkJzRR6+7V7C92BzU36yEZSvYBdqUCggGA
ZAAPoZ9ZLZUOwvXDwNsA3ydkbwdaLtWdekFrxQUxgPiRsj8/kQHk9pB/YrnsCUi2
ze0tMzHMY+TPxFMNBXLrhcVEEkl3SzboVBX5ND+b8TBl4tXeksnXwlPHbNG5i4os
iZ8QjgL450NqEIXRXIppPhTFIVbD5SNsd0tJFNg+lKT+sQjta+TEUOuZMmNXjeWH
GZji4yk/EMsp4uGTXHkRpvHCDGQ6mU4R+Q/5xhdqwFiQMq2ct27P5Ny7dcxdH6RR
OirdgiD902engQv2l8e/xUykeFZL35xBaf+FJ/x+VhcB01ThjT5DnqypEsung+qZ
gVMEcrQSHZCvcSpu187wSvLgS50rxgPWCwQ1UEhqacl1w/xPTDR27Q0eLlIVFnNT
RCfQCwE2OWKGbVhKNBY116FG6JRx23Lo9aYY1Bg3mY4jL+xNrOdXJrgK23lrhwFe
qiU41t+6pwQ1ExFG39GrBoDW9HJhtbTiOejYSav6B+/fmQTYhvoSBBwHr0I8U1SR
-----END DSA PARAMETERS-----
)";

constexpr int kRsaBits = 3072;
constexpr unsigned long kRsaExponent = 65537;

using ParamBld = std::unique_ptr<OSSL_PARAM_BLD, ossl::Deleter<OSSL_PARAM_BLD_free>>;
using Params = std::unique_ptr<OSSL_PARAM, ossl::Deleter<OSSL_PARAM_free>>;
using Bio = std::unique_ptr<BIO, ossl::Deleter<BIO_free>>;
using EcGroup = std::unique_ptr<EC_GROUP, ossl::Deleter<EC_GROUP_free>>;
using EcPoint = std::unique_ptr<EC_POINT, ossl::Deleter<EC_POINT_free>>;

ParamBld new_bld() {
  ParamBld b(OSSL_PARAM_BLD_new());
  check(b != nullptr, "OSSL_PARAM_BLD_new");
  return b;
}

ossl::PKey from_params(const char* type, ParamBld& bld, int selection) {
  Params params(OSSL_PARAM_BLD_to_param(bld.get()));
  check(params != nullptr, "OSSL_PARAM_BLD_to_param");
  ossl::PKeyCtx ctx(EVP_PKEY_CTX_new_from_name(nullptr, type, nullptr));
  check(ctx != nullptr, "EVP_PKEY_CTX_new_from_name");
  check(EVP_PKEY_fromdata_init(ctx.get()) == 1, "EVP_PKEY_fromdata_init");
  EVP_PKEY* raw = nullptr;
  check(EVP_PKEY_fromdata(ctx.get(), &raw, selection, params.get()) == 1, "EVP_PKEY_fromdata");
  return ossl::PKey(raw);
}

ossl::Bignum get_bn(const EVP_PKEY* key, const char* name) {
  BIGNUM* raw = nullptr;
  check(EVP_PKEY_get_bn_param(key, name, &raw) == 1, name);
  return ossl::Bignum(raw);
}

// Deterministic under a deterministic rng: random odd start with the top two
// bits set, then the next prime p with gcd(p - 1, e) = 1.
ossl::Bignum gen_rsa_prime(int bits, RandomSource& rng, BN_CTX* ctx) {
  auto e = ossl::new_bn();
  check(BN_set_word(e.get(), kRsaExponent) == 1, "BN_set_word");
  auto pm1 = ossl::new_bn();
  auto g = ossl::new_bn();
  while (true) {
    auto raw = rng.bytes(static_cast<std::size_t>(bits) / 8);
    raw.front() |= 0xC0;
    raw.back() |= 0x01;
    auto cand = ossl::bn_from_bytes(raw);
    for (int step = 0; step < 1 << 16 && BN_num_bits(cand.get()) == bits; ++step) {
      const int r = BN_check_prime(cand.get(), ctx, nullptr);
      check(r >= 0, "BN_check_prime");
      if (r == 1) {
        check(BN_sub(pm1.get(), cand.get(), BN_value_one()) == 1, "BN_sub");
        check(BN_gcd(g.get(), pm1.get(), e.get(), ctx) == 1, "BN_gcd");
        if (BN_is_one(g.get())) return cand;
      }
      check(BN_add_word(cand.get(), 2) == 1, "BN_add_word");
    }
  }
}

struct RsaPair {
  ossl::PKey priv;
  ossl::PKey pub;
};

RsaPair gen_rsa(RandomSource& rng) {
  auto ctx = ossl::new_bn_ctx();
  const int half = kRsaBits / 2;
  ossl::Bignum p, q;
  auto n = ossl::new_bn();
  auto diff = ossl::new_bn();
  while (true) {
    p = gen_rsa_prime(half, rng, ctx.get());
    q = gen_rsa_prime(half, rng, ctx.get());
    check(BN_sub(diff.get(), p.get(), q.get()) == 1, "BN_sub");
    // |p - q| must not be small (Fermat factoring).
    if (BN_num_bits(diff.get()) <= half - 100) continue;
    check(BN_mul(n.get(), p.get(), q.get(), ctx.get()) == 1, "BN_mul");
    if (BN_num_bits(n.get()) == kRsaBits) break;
  }
  if (BN_cmp(p.get(), q.get()) < 0) std::swap(p, q);

  auto e = ossl::new_bn();
  check(BN_set_word(e.get(), kRsaExponent) == 1, "BN_set_word");
  auto pm1 = ossl::new_bn(), qm1 = ossl::new_bn(), gcd = ossl::new_bn(), lcm = ossl::new_bn();
  check(BN_sub(pm1.get(), p.get(), BN_value_one()) == 1, "BN_sub");
  check(BN_sub(qm1.get(), q.get(), BN_value_one()) == 1, "BN_sub");
  check(BN_gcd(gcd.get(), pm1.get(), qm1.get(), ctx.get()) == 1, "BN_gcd");
  check(BN_mul(lcm.get(), pm1.get(), qm1.get(), ctx.get()) == 1, "BN_mul");
  check(BN_div(lcm.get(), nullptr, lcm.get(), gcd.get(), ctx.get()) == 1, "BN_div");
  ossl::Bignum d(BN_mod_inverse(nullptr, e.get(), lcm.get(), ctx.get()));
  check(d != nullptr, "BN_mod_inverse");
  auto dp = ossl::new_bn(), dq = ossl::new_bn();
  check(BN_mod(dp.get(), d.get(), pm1.get(), ctx.get()) == 1, "BN_mod");
  check(BN_mod(dq.get(), d.get(), qm1.get(), ctx.get()) == 1, "BN_mod");
  ossl::Bignum qinv(BN_mod_inverse(nullptr, q.get(), p.get(), ctx.get()));
  check(qinv != nullptr, "BN_mod_inverse");

  RsaPair out;
  {
    auto bld = new_bld();
    check(OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_N, n.get()) == 1 &&
              OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_E, e.get()) == 1 &&
              OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_D, d.get()) == 1 &&
              OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_FACTOR1, p.get()) == 1 &&
              OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_FACTOR2, q.get()) == 1 &&
              OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_EXPONENT1, dp.get()) == 1 &&
              OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_EXPONENT2, dq.get()) == 1 &&
              OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_COEFFICIENT1, qinv.get()) == 1,
          "RSA params");
    out.priv = from_params("RSA", bld, EVP_PKEY_KEYPAIR);
  }
  {
    auto bld = new_bld();
    check(OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_N, n.get()) == 1 &&
              OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_E, e.get()) == 1,
          "RSA params");
    out.pub = from_params("RSA", bld, EVP_PKEY_PUBLIC_KEY);
  }
  return out;
}

struct EcPair {
  ossl::PKey priv;
  ossl::PKey pub;
};

EcPair gen_ec(RandomSource& rng) {
  auto ctx = ossl::new_bn_ctx();
  EcGroup group(EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1));
  check(group != nullptr, "EC_GROUP_new_by_curve_name");
  const BIGNUM* order = EC_GROUP_get0_order(group.get());
  auto hi = ossl::bn_copy(order);
  check(BN_sub_word(hi.get(), 1) == 1, "BN_sub_word");
  auto priv = ossl::random_range(BN_value_one(), hi.get(), rng);
  EcPoint point(EC_POINT_new(group.get()));
  check(point != nullptr, "EC_POINT_new");
  check(EC_POINT_mul(group.get(), point.get(), priv.get(), nullptr, nullptr, ctx.get()) == 1,
        "EC_POINT_mul");
  Bytes pub(65);
  check(EC_POINT_point2oct(group.get(), point.get(), POINT_CONVERSION_UNCOMPRESSED, pub.data(),
                           pub.size(), ctx.get()) == pub.size(),
        "EC_POINT_point2oct");

  EcPair out;
  {
    auto bld = new_bld();
    check(OSSL_PARAM_BLD_push_utf8_string(bld.get(), OSSL_PKEY_PARAM_GROUP_NAME, kCurveName, 0) ==
                  1 &&
              OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_PRIV_KEY, priv.get()) == 1 &&
              OSSL_PARAM_BLD_push_octet_string(bld.get(), OSSL_PKEY_PARAM_PUB_KEY, pub.data(),
                                               pub.size()) == 1,
          "EC params");
    out.priv = from_params("EC", bld, EVP_PKEY_KEYPAIR);
  }
  {
    auto bld = new_bld();
    check(OSSL_PARAM_BLD_push_utf8_string(bld.get(), OSSL_PKEY_PARAM_GROUP_NAME, kCurveName, 0) ==
                  1 &&
              OSSL_PARAM_BLD_push_octet_string(bld.get(), OSSL_PKEY_PARAM_PUB_KEY, pub.data(),
                                               pub.size()) == 1,
          "EC params");
    out.pub = from_params("EC", bld, EVP_PKEY_PUBLIC_KEY);
  }
  return out;
}

struct DsaDomain {
  ossl::Bignum p, q, g;
};

const DsaDomain& dsa_domain() {
  static const DsaDomain domain = [] {
    Bio bio(BIO_new_mem_buf(kDsaParamsPem, -1));
    check(bio != nullptr, "BIO_new_mem_buf");
    ossl::PKey params(PEM_read_bio_Parameters(bio.get(), nullptr));
    check(params != nullptr, "PEM_read_bio_Parameters");
    return DsaDomain{get_bn(params.get(), OSSL_PKEY_PARAM_FFC_P),
                     get_bn(params.get(), OSSL_PKEY_PARAM_FFC_Q),
                     get_bn(params.get(), OSSL_PKEY_PARAM_FFC_G)};
  }();
  return domain;
}

struct DsaPair {
  ossl::PKey priv;
  ossl::PKey pub;
};

DsaPair gen_dsa(RandomSource& rng) {
  const auto& dom = dsa_domain();
  auto ctx = ossl::new_bn_ctx();
  auto hi = ossl::bn_copy(dom.q.get());
  check(BN_sub_word(hi.get(), 1) == 1, "BN_sub_word");
  auto x = ossl::random_range(BN_value_one(), hi.get(), rng);
  auto y = ossl::new_bn();
  check(BN_mod_exp_mont_consttime(y.get(), dom.g.get(), x.get(), dom.p.get(), ctx.get(),
                                  nullptr) == 1,
        "BN_mod_exp_mont_consttime");

  auto push_domain = [&](ParamBld& bld) {
    check(OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_FFC_P, dom.p.get()) == 1 &&
              OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_FFC_Q, dom.q.get()) == 1 &&
              OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_FFC_G, dom.g.get()) == 1 &&
              OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_PUB_KEY, y.get()) == 1,
          "DSA params");
  };
  DsaPair out;
  {
    auto bld = new_bld();
    push_domain(bld);
    check(OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_PRIV_KEY, x.get()) == 1, "DSA params");
    out.priv = from_params("DSA", bld, EVP_PKEY_KEYPAIR);
  }
  {
    auto bld = new_bld();
    push_domain(bld);
    out.pub = from_params("DSA", bld, EVP_PKEY_PUBLIC_KEY);
  }
  return out;
}

Bytes der_public(const EVP_PKEY* key) {
  unsigned char* der = nullptr;
  const int len = i2d_PUBKEY(key, &der);
  check(len > 0, "i2d_PUBKEY");
  Bytes out(der, der + len);
  OPENSSL_free(der);
  return out;
}

}  // namespace

std::string_view to_string(CipherSuite s) {
  switch (s) {
    case CipherSuite::kRsa: return "RSA";
    case CipherSuite::kEcc: return "ECC";
    case CipherSuite::kElGamalDsa: return "ELGAMAL_DSA";
  }
  return "?";
}

CipherSuite parse_cipher_suite(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rsa") return CipherSuite::kRsa;
  if (lower == "ecc") return CipherSuite::kEcc;
  if (lower == "elgamal" || lower == "elgamal_dsa") return CipherSuite::kElGamalDsa;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown cipher suite '" + std::string(s) + "' (expected rsa, ecc or elgamal)");
}

SuiteParams suite_params(CipherSuite s) {
  switch (s) {
    case CipherSuite::kRsa: return {3072, 3072, 0};
    case CipherSuite::kEcc: return {256, 256, 0};
    case CipherSuite::kElGamalDsa: return {3072, 3072, 256};
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown cipher suite");
}

const ElGamalGroup& elgamal_group() {
  static const ElGamalGroup group = [] {
    ElGamalGroup g;
    g.p = ossl::Bignum(BN_get_rfc3526_prime_3072(nullptr));
    check(g.p != nullptr, "BN_get_rfc3526_prime_3072");
    g.q = ossl::bn_copy(g.p.get());
    check(BN_rshift1(g.q.get(), g.q.get()) == 1, "BN_rshift1");
    g.g = ossl::new_bn();
    check(BN_set_word(g.g.get(), 2) == 1, "BN_set_word");
    return g;
  }();
  return group;
}

CipherSuite PublicKeySet::suite() const { return impl_->suite; }

int PublicKeySet::enc_bits() const {
  if (impl_->suite == CipherSuite::kElGamalDsa) return BN_num_bits(elgamal_group().p.get());
  return EVP_PKEY_get_bits(impl_->enc.get());
}

int PublicKeySet::sig_bits() const { return EVP_PKEY_get_bits(impl_->sig.get()); }

Bytes PublicKeySet::fingerprint() const {
  Bytes buf{static_cast<std::uint8_t>(impl_->suite)};
  auto append = [&](const Bytes& b) { buf.insert(buf.end(), b.begin(), b.end()); };
  if (impl_->suite == CipherSuite::kElGamalDsa) {
    append(ossl::bn_to_fixed(impl_->elgamal_y.get(),
                             static_cast<std::size_t>(BN_num_bytes(elgamal_group().p.get()))));
  } else {
    append(der_public(impl_->enc.get()));
  }
  append(der_public(impl_->sig.get()));
  return sym::sha256(buf);
}

KeyPairSet keygen(CipherSuite suite, std::optional<std::uint64_t> seed) {
  std::unique_ptr<SeededRandom> seeded;
  if (seed) seeded = std::make_unique<SeededRandom>(*seed);
  RandomSource& rng = seeded ? static_cast<RandomSource&>(*seeded) : system_random();

  auto pub = std::make_shared<detail::PublicImpl>();
  auto priv = std::make_shared<detail::PrivateImpl>();
  pub->suite = suite;
  switch (suite) {
    case CipherSuite::kRsa: {
      auto enc = gen_rsa(rng);
      auto sig = gen_rsa(rng);
      pub->enc = std::move(enc.pub);
      priv->enc = std::move(enc.priv);
      pub->sig = std::move(sig.pub);
      priv->sig = std::move(sig.priv);
      break;
    }
    case CipherSuite::kEcc: {
      auto enc = gen_ec(rng);
      auto sig = gen_ec(rng);
      pub->enc = std::move(enc.pub);
      priv->enc = std::move(enc.priv);
      pub->sig = std::move(sig.pub);
      priv->sig = std::move(sig.priv);
      break;
    }
    case CipherSuite::kElGamalDsa: {
      const auto& grp = elgamal_group();
      auto ctx = ossl::new_bn_ctx();
      auto hi = ossl::bn_copy(grp.q.get());
      check(BN_sub_word(hi.get(), 1) == 1, "BN_sub_word");
      // Full-size exponent, as in OpenPGP ElGamal keys.
      priv->elgamal_x = ossl::random_range(BN_value_one(), hi.get(), rng);
      pub->elgamal_y = ossl::new_bn();
      check(BN_mod_exp_mont_consttime(pub->elgamal_y.get(), grp.g.get(), priv->elgamal_x.get(),
                                      grp.p.get(), ctx.get(), nullptr) == 1,
            "BN_mod_exp_mont_consttime");
      auto sig = gen_dsa(rng);
      pub->sig = std::move(sig.pub);
      priv->sig = std::move(sig.priv);
      break;
    }
  }
  return KeyPairSet(PublicKeySet(std::move(pub)), std::move(priv));
}

}  // namespace petcarbon::email

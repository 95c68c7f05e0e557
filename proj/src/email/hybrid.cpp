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
#include <openssl/err.h>
#include <openssl/param_build.h>
#include <openssl/rsa.h>

#include <string>

#include "keys.hpp"
#include "petcarbon/common/error.hpp"
#include "petcarbon/common/random.hpp"
#include "petcarbon/common/symmetric.hpp"

namespace petcarbon::email {

using ossl::check;

namespace {

constexpr std::size_t kRsaWrapSize = 384;
constexpr std::size_t kEcPointSize = 65;
constexpr std::size_t kElGamalElementSize = 384;
constexpr std::size_t kSealedKeySize = sym::kKeySize + sym::kTagSize;

Bytes suite_aad(CipherSuite s) { return {static_cast<std::uint8_t>(s)}; }

void require_suite(CipherSuite want, CipherSuite got, const char* what) {
  if (want != got) {
    throw Error(ErrorCode::kKeyMismatch, std::string(what) + ": " + std::string(to_string(got)) +
                                             " input with " + std::string(to_string(want)) +
                                             " keys");
  }
}

[[noreturn]] void auth_failure(const char* what) {
  ERR_clear_error();
  throw Error(ErrorCode::kAuthFailure, what);
}

// Key-encryption key from a DH-style shared secret, bound to both public values.
Bytes derive_kek(CipherSuite suite, ByteView shared, ByteView ephemeral, ByteView recipient) {
  Bytes salt(ephemeral.begin(), ephemeral.end());
  salt.insert(salt.end(), recipient.begin(), recipient.end());
  const std::string info = "petcarbon email key wrap " + std::string(to_string(suite));
  return sym::hkdf_sha256(shared, salt, as_bytes(info), sym::kKeySize);
}

// The KEK is single use, so a fixed nonce is safe.
Bytes seal_session_key(CipherSuite suite, ByteView kek, ByteView session_key) {
  const Bytes zero_nonce(sym::kNonceSize, 0);
  return sym::aes_gcm_seal(kek, zero_nonce, session_key, suite_aad(suite));
}

Bytes open_session_key(CipherSuite suite, ByteView kek, ByteView sealed) {
  const Bytes zero_nonce(sym::kNonceSize, 0);
  auto key = sym::aes_gcm_open(kek, zero_nonce, sealed, suite_aad(suite));
  if (!key) auth_failure("session key envelope does not open under this key");
  return std::move(*key);
}

Bytes ec_encoded_public(const EVP_PKEY* key) {
  Bytes out(kEcPointSize);
  std::size_t len = 0;
  check(EVP_PKEY_get_octet_string_param(key, OSSL_PKEY_PARAM_ENCODED_PUBLIC_KEY, out.data(),
                                        out.size(), &len) == 1 &&
            len == kEcPointSize,
        "EVP_PKEY_get_octet_string_param");
  return out;
}

Bytes ecdh(EVP_PKEY* own, EVP_PKEY* peer) {
  ossl::PKeyCtx ctx(EVP_PKEY_CTX_new_from_pkey(nullptr, own, nullptr));
  check(ctx != nullptr, "EVP_PKEY_CTX_new_from_pkey");
  check(EVP_PKEY_derive_init(ctx.get()) == 1, "EVP_PKEY_derive_init");
  check(EVP_PKEY_derive_set_peer(ctx.get(), peer) == 1, "EVP_PKEY_derive_set_peer");
  std::size_t len = 0;
  check(EVP_PKEY_derive(ctx.get(), nullptr, &len) == 1, "EVP_PKEY_derive");
  Bytes secret(len);
  check(EVP_PKEY_derive(ctx.get(), secret.data(), &len) == 1, "EVP_PKEY_derive");
  secret.resize(len);
  return secret;
}

ossl::PKey ec_public_from_octets(ByteView point) {
  using ParamBld = std::unique_ptr<OSSL_PARAM_BLD, ossl::Deleter<OSSL_PARAM_BLD_free>>;
  using Params = std::unique_ptr<OSSL_PARAM, ossl::Deleter<OSSL_PARAM_free>>;
  ParamBld bld(OSSL_PARAM_BLD_new());
  check(bld != nullptr, "OSSL_PARAM_BLD_new");
  check(OSSL_PARAM_BLD_push_utf8_string(bld.get(), OSSL_PKEY_PARAM_GROUP_NAME, kCurveName, 0) ==
                1 &&
            OSSL_PARAM_BLD_push_octet_string(bld.get(), OSSL_PKEY_PARAM_PUB_KEY, point.data(),
                                             point.size()) == 1,
        "EC params");
  Params params(OSSL_PARAM_BLD_to_param(bld.get()));
  check(params != nullptr, "OSSL_PARAM_BLD_to_param");
  ossl::PKeyCtx ctx(EVP_PKEY_CTX_new_from_name(nullptr, "EC", nullptr));
  check(ctx != nullptr && EVP_PKEY_fromdata_init(ctx.get()) == 1, "EVP_PKEY_fromdata_init");
  EVP_PKEY* raw = nullptr;
  // Off-curve points are rejected here.
  if (EVP_PKEY_fromdata(ctx.get(), &raw, EVP_PKEY_PUBLIC_KEY, params.get()) != 1) {
    auth_failure("ephemeral point is not on the curve");
  }
  return ossl::PKey(raw);
}

ossl::PKey ec_ephemeral() {
  ossl::PKey key(EVP_PKEY_Q_keygen(nullptr, nullptr, "EC", kCurveName));
  check(key != nullptr, "EVP_PKEY_Q_keygen");
  return key;
}

ossl::PKeyCtx rsa_oaep_ctx(EVP_PKEY* key, bool encrypt) {
  ossl::PKeyCtx ctx(EVP_PKEY_CTX_new_from_pkey(nullptr, key, nullptr));
  check(ctx != nullptr, "EVP_PKEY_CTX_new_from_pkey");
  check((encrypt ? EVP_PKEY_encrypt_init(ctx.get()) : EVP_PKEY_decrypt_init(ctx.get())) == 1,
        "EVP_PKEY_crypt_init");
  check(EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_PKCS1_OAEP_PADDING) == 1 &&
            EVP_PKEY_CTX_set_rsa_oaep_md(ctx.get(), EVP_sha256()) == 1 &&
            EVP_PKEY_CTX_set_rsa_mgf1_md(ctx.get(), EVP_sha256()) == 1,
        "RSA OAEP setup");
  return ctx;
}

Bytes wrap_rsa(const detail::PublicImpl& pub, ByteView session_key) {
  auto ctx = rsa_oaep_ctx(pub.enc.get(), true);
  std::size_t len = 0;
  check(EVP_PKEY_encrypt(ctx.get(), nullptr, &len, session_key.data(), session_key.size()) == 1,
        "EVP_PKEY_encrypt");
  Bytes out(len);
  check(EVP_PKEY_encrypt(ctx.get(), out.data(), &len, session_key.data(), session_key.size()) ==
            1,
        "EVP_PKEY_encrypt");
  out.resize(len);
  return out;
}

Bytes unwrap_rsa(const detail::PrivateImpl& priv, ByteView wrapped) {
  if (wrapped.size() != kRsaWrapSize) auth_failure("RSA envelope has the wrong length");
  auto ctx = rsa_oaep_ctx(priv.enc.get(), false);
  Bytes out(kRsaWrapSize);
  std::size_t len = out.size();
  if (EVP_PKEY_decrypt(ctx.get(), out.data(), &len, wrapped.data(), wrapped.size()) != 1 ||
      len != sym::kKeySize) {
    auth_failure("RSA envelope does not open under this key");
  }
  out.resize(len);
  return out;
}

Bytes wrap_ecc(const detail::PublicImpl& pub, ByteView session_key) {
  auto eph = ec_ephemeral();
  const auto shared = ecdh(eph.get(), pub.enc.get());
  const auto eph_pub = ec_encoded_public(eph.get());
  const auto kek = derive_kek(CipherSuite::kEcc, shared, eph_pub, ec_encoded_public(pub.enc.get()));
  Bytes out = eph_pub;
  const auto sealed = seal_session_key(CipherSuite::kEcc, kek, session_key);
  out.insert(out.end(), sealed.begin(), sealed.end());
  return out;
}

Bytes unwrap_ecc(const detail::PrivateImpl& priv, ByteView wrapped) {
  if (wrapped.size() != kEcPointSize + kSealedKeySize) {
    auth_failure("ECC envelope has the wrong length");
  }
  const auto eph_pub = wrapped.first(kEcPointSize);
  auto peer = ec_public_from_octets(eph_pub);
  const auto shared = ecdh(priv.enc.get(), peer.get());
  const auto kek =
      derive_kek(CipherSuite::kEcc, shared, eph_pub, ec_encoded_public(priv.enc.get()));
  return open_session_key(CipherSuite::kEcc, kek, wrapped.subspan(kEcPointSize));
}

// Hashed ElGamal: c1 = g^r, KEK = HKDF(y^r); the session key is sealed under KEK.
Bytes wrap_elgamal(const detail::PublicImpl& pub, ByteView session_key) {
  const auto& grp = elgamal_group();
  auto ctx = ossl::new_bn_ctx();
  auto hi = ossl::bn_copy(grp.q.get());
  check(BN_sub_word(hi.get(), 1) == 1, "BN_sub_word");
  auto r = ossl::random_range(BN_value_one(), hi.get(), system_random());
  auto c1 = ossl::new_bn();
  auto s = ossl::new_bn();
  check(BN_mod_exp_mont_consttime(c1.get(), grp.g.get(), r.get(), grp.p.get(), ctx.get(),
                                  nullptr) == 1 &&
            BN_mod_exp_mont_consttime(s.get(), pub.elgamal_y.get(), r.get(), grp.p.get(),
                                      ctx.get(), nullptr) == 1,
        "BN_mod_exp_mont_consttime");
  const auto c1_bytes = ossl::bn_to_fixed(c1.get(), kElGamalElementSize);
  const auto kek =
      derive_kek(CipherSuite::kElGamalDsa, ossl::bn_to_fixed(s.get(), kElGamalElementSize),
                 c1_bytes, ossl::bn_to_fixed(pub.elgamal_y.get(), kElGamalElementSize));
  Bytes out = c1_bytes;
  const auto sealed = seal_session_key(CipherSuite::kElGamalDsa, kek, session_key);
  out.insert(out.end(), sealed.begin(), sealed.end());
  return out;
}

Bytes unwrap_elgamal(const detail::PublicImpl& pub, const detail::PrivateImpl& priv,
                     ByteView wrapped) {
  if (wrapped.size() != kElGamalElementSize + kSealedKeySize) {
    auth_failure("ElGamal envelope has the wrong length");
  }
  const auto& grp = elgamal_group();
  auto ctx = ossl::new_bn_ctx();
  const auto c1_bytes = wrapped.first(kElGamalElementSize);
  auto c1 = ossl::bn_from_bytes(c1_bytes);
  // Reject 0, 1, p - 1 and anything outside [0, p).
  auto pm1 = ossl::bn_copy(grp.p.get());
  check(BN_sub_word(pm1.get(), 1) == 1, "BN_sub_word");
  if (BN_cmp(c1.get(), BN_value_one()) <= 0 || BN_cmp(c1.get(), pm1.get()) >= 0) {
    auth_failure("ElGamal element out of range");
  }
  auto s = ossl::new_bn();
  check(BN_mod_exp_mont_consttime(s.get(), c1.get(), priv.elgamal_x.get(), grp.p.get(), ctx.get(),
                                  nullptr) == 1,
        "BN_mod_exp_mont_consttime");
  const auto kek =
      derive_kek(CipherSuite::kElGamalDsa, ossl::bn_to_fixed(s.get(), kElGamalElementSize),
                 c1_bytes, ossl::bn_to_fixed(pub.elgamal_y.get(), kElGamalElementSize));
  return open_session_key(CipherSuite::kElGamalDsa, kek, wrapped.subspan(kElGamalElementSize));
}

}  // namespace

std::size_t envelope_overhead(CipherSuite suite) {
  std::size_t wrapped = 0;
  switch (suite) {
    case CipherSuite::kRsa: wrapped = kRsaWrapSize; break;
    case CipherSuite::kEcc: wrapped = kEcPointSize + kSealedKeySize; break;
    case CipherSuite::kElGamalDsa: wrapped = kElGamalElementSize + kSealedKeySize; break;
  }
  return 1 + wrapped + sym::kNonceSize + sym::kTagSize;
}

HybridCiphertext encrypt_email(ByteView message, const PublicKeySet& recipient) {
  if (message.empty()) throw Error(ErrorCode::kInvalidMessage, "empty message");
  const auto& pub = recipient.impl();
  auto& rng = system_random();
  const auto session_key = rng.bytes(sym::kKeySize);

  HybridCiphertext ct;
  ct.suite = pub.suite;
  switch (pub.suite) {
    case CipherSuite::kRsa: ct.wrapped_key = wrap_rsa(pub, session_key); break;
    case CipherSuite::kEcc: ct.wrapped_key = wrap_ecc(pub, session_key); break;
    case CipherSuite::kElGamalDsa: ct.wrapped_key = wrap_elgamal(pub, session_key); break;
  }
  ct.nonce = rng.bytes(sym::kNonceSize);
  ct.body = sym::aes_gcm_seal(session_key, ct.nonce, message, suite_aad(pub.suite));
  return ct;
}

Bytes decrypt_email(const HybridCiphertext& ct, const KeyPairSet& recipient) {
  require_suite(recipient.suite(), ct.suite, "decrypt_email");
  const auto& priv = recipient.impl();
  Bytes session_key;
  switch (ct.suite) {
    case CipherSuite::kRsa: session_key = unwrap_rsa(priv, ct.wrapped_key); break;
    case CipherSuite::kEcc: session_key = unwrap_ecc(priv, ct.wrapped_key); break;
    case CipherSuite::kElGamalDsa:
      session_key = unwrap_elgamal(recipient.public_keys().impl(), priv, ct.wrapped_key);
      break;
  }
  if (ct.nonce.size() != sym::kNonceSize) auth_failure("bad nonce length");
  auto body = sym::aes_gcm_open(session_key, ct.nonce, ct.body, suite_aad(ct.suite));
  if (!body) auth_failure("message body failed authentication");
  if (body->empty()) throw Error(ErrorCode::kInvalidMessage, "empty message");
  return std::move(*body);
}

Signature sign_email(ByteView message, const KeyPairSet& sender) {
  ossl::MdCtx md(EVP_MD_CTX_new());
  check(md != nullptr, "EVP_MD_CTX_new");
  check(EVP_DigestSignInit(md.get(), nullptr, EVP_sha256(), nullptr, sender.impl().sig.get()) == 1,
        "EVP_DigestSignInit");
  std::size_t len = 0;
  check(EVP_DigestSign(md.get(), nullptr, &len, message.data(), message.size()) == 1,
        "EVP_DigestSign");
  Signature sig;
  sig.suite = sender.suite();
  sig.bytes.resize(len);
  check(EVP_DigestSign(md.get(), sig.bytes.data(), &len, message.data(), message.size()) == 1,
        "EVP_DigestSign");
  sig.bytes.resize(len);
  return sig;
}

bool verify_email(ByteView message, const Signature& sig, const PublicKeySet& sender) {
  require_suite(sender.suite(), sig.suite, "verify_email");
  ossl::MdCtx md(EVP_MD_CTX_new());
  check(md != nullptr, "EVP_MD_CTX_new");
  check(EVP_DigestVerifyInit(md.get(), nullptr, EVP_sha256(), nullptr, sender.impl().sig.get()) ==
            1,
        "EVP_DigestVerifyInit");
  const int r =
      EVP_DigestVerify(md.get(), sig.bytes.data(), sig.bytes.size(), message.data(), message.size());
  // Malformed DER is reported as an error rather than 0; both mean "not valid".
  if (r != 1) ERR_clear_error();
  return r == 1;
}

}  // namespace petcarbon::email

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

#include <gtest/gtest.h>
#include <openssl/evp.h>

#include <map>
#include <memory>
#include <random>

#include "../../src/email/keys.hpp"
#include "petcarbon/email/cipher.hpp"
#include "petcarbon/email/corpus.hpp"
#include "petcarbon/email/workloads.hpp"
#include "petcarbon/harness/runner.hpp"
#include "test_support.hpp"

namespace petcarbon::email {
namespace {

using testing::code_of;
using testing::TempDir;

constexpr CipherSuite kAllSuites[] = {CipherSuite::kRsa, CipherSuite::kEcc,
                                      CipherSuite::kElGamalDsa};

// Keygen is the slow part; share one seeded key set per suite.
const KeyPairSet& keys_for(CipherSuite s) {
  static std::map<CipherSuite, std::unique_ptr<KeyPairSet>> cache;
  auto& slot = cache[s];
  if (!slot) slot = std::make_unique<KeyPairSet>(keygen(s, 1000 + static_cast<int>(s)));
  return *slot;
}

const EmailCorpus& bundled() {
  static const EmailCorpus c = load_corpus(testing::data_dir() / "email_corpus");
  return c;
}

class PerSuite : public ::testing::TestWithParam<CipherSuite> {};

INSTANTIATE_TEST_SUITE_P(AllSuites, PerSuite, ::testing::ValuesIn(kAllSuites),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(CipherSuites, ParseNames) {
  EXPECT_EQ(parse_cipher_suite("rsa"), CipherSuite::kRsa);
  EXPECT_EQ(parse_cipher_suite("ECC"), CipherSuite::kEcc);
  EXPECT_EQ(parse_cipher_suite("elgamal"), CipherSuite::kElGamalDsa);
  EXPECT_EQ(code_of([] { parse_cipher_suite("des"); }), ErrorCode::kInvalidArgument);
}

TEST(Keygen, RsaModulusIs3072Bits) {
  const auto& k = keys_for(CipherSuite::kRsa).public_keys();
  EXPECT_EQ(k.enc_bits(), 3072);
  EXPECT_EQ(k.sig_bits(), 3072);
}

TEST(Keygen, EccUses256BitCurve) {
  const auto& k = keys_for(CipherSuite::kEcc).public_keys();
  EXPECT_EQ(k.enc_bits(), 256);
  EXPECT_EQ(k.sig_bits(), 256);
}

TEST(Keygen, ElGamalGroupAndDsaSizes) {
  const auto& k = keys_for(CipherSuite::kElGamalDsa).public_keys();
  EXPECT_EQ(k.enc_bits(), 3072);
  EXPECT_EQ(k.sig_bits(), 3072);
  BIGNUM* q = nullptr;
  ASSERT_EQ(EVP_PKEY_get_bn_param(k.impl().sig.get(), "q", &q), 1);
  EXPECT_EQ(BN_num_bits(q), 256);
  BN_free(q);
}

TEST(Keygen, MatchesSuiteParams) {
  for (auto s : kAllSuites) {
    const auto& k = keys_for(s).public_keys();
    EXPECT_EQ(k.enc_bits(), suite_params(s).enc_bits);
    EXPECT_EQ(k.sig_bits(), suite_params(s).sig_bits);
  }
}

TEST_P(PerSuite, SameSeedSameKeys) {
  const auto a = keygen(GetParam(), 77);
  const auto b = keygen(GetParam(), 77);
  const auto c = keygen(GetParam(), 78);
  EXPECT_EQ(a.public_keys().fingerprint(), b.public_keys().fingerprint());
  EXPECT_NE(a.public_keys().fingerprint(), c.public_keys().fingerprint());
  // A key from one seed opens ciphertexts made for its twin from the same seed.
  const auto ct = encrypt_email(as_bytes("twin"), a.public_keys());
  EXPECT_EQ(petcarbon::to_string(decrypt_email(ct, b)), "twin");
}

TEST_P(PerSuite, UnseededKeysDiffer) {
  EXPECT_NE(keygen(GetParam()).public_keys().fingerprint(),
            keygen(GetParam()).public_keys().fingerprint());
}

TEST_P(PerSuite, GeneratedKeysPassOpenSslChecks) {
  const auto& keys = keys_for(GetParam());
  auto check = [](EVP_PKEY* k) {
    std::unique_ptr<EVP_PKEY_CTX, decltype(&EVP_PKEY_CTX_free)> ctx(
        EVP_PKEY_CTX_new_from_pkey(nullptr, k, nullptr), EVP_PKEY_CTX_free);
    ASSERT_NE(ctx, nullptr);
    EXPECT_EQ(EVP_PKEY_pairwise_check(ctx.get()), 1);
    EXPECT_EQ(EVP_PKEY_public_check(ctx.get()), 1);
  };
  check(keys.impl().sig.get());
  if (GetParam() != CipherSuite::kElGamalDsa) {
    check(keys.impl().enc.get());
  } else {
    // y must lie in the order-q subgroup: y^q = 1 mod p.
    const auto& grp = elgamal_group();
    auto ctx = ossl::new_bn_ctx();
    auto r = ossl::new_bn();
    ASSERT_EQ(BN_mod_exp(r.get(), keys.public_keys().impl().elgamal_y.get(), grp.q.get(),
                         grp.p.get(), ctx.get()),
              1);
    EXPECT_TRUE(BN_is_one(r.get()));
    // Full-size exponent.
    EXPECT_GT(BN_num_bits(keys.impl().elgamal_x.get()), 3000);
  }
}

TEST_P(PerSuite, RoundtripOverBundledCorpus) {
  const auto& keys = keys_for(GetParam());
  for (const auto& m : bundled().messages) {
    const auto ct = encrypt_email(m, keys.public_keys());
    ASSERT_EQ(decrypt_email(ct, keys), m);
    const auto sig = sign_email(m, keys);
    ASSERT_TRUE(verify_email(m, sig, keys.public_keys()));
  }
}

TEST_P(PerSuite, RandomMessagesRoundtrip) {
  const auto& keys = keys_for(GetParam());
  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    Bytes m(1 + rng() % 3000);
    for (auto& b : m) b = static_cast<std::uint8_t>(rng());
    EXPECT_EQ(decrypt_email(encrypt_email(m, keys.public_keys()), keys), m);
  }
}

TEST_P(PerSuite, EnvelopeOverheadIsConstant) {
  const auto& keys = keys_for(GetParam());
  // Measure the constant once on a 1-byte message, then hold every message to it.
  const auto probe = encrypt_email(as_bytes("x"), keys.public_keys());
  const std::size_t overhead = probe.size() - 1;
  EXPECT_EQ(overhead, envelope_overhead(GetParam()));
  for (std::size_t i = 0; i < bundled().size(); i += 7) {
    const auto& m = bundled().messages[i];
    EXPECT_EQ(encrypt_email(m, keys.public_keys()).size(), m.size() + overhead);
  }
}

TEST_P(PerSuite, EncryptionIsRandomized) {
  const auto& keys = keys_for(GetParam());
  const auto a = encrypt_email(as_bytes("same"), keys.public_keys());
  const auto b = encrypt_email(as_bytes("same"), keys.public_keys());
  EXPECT_NE(a.wrapped_key, b.wrapped_key);
  EXPECT_NE(a.body, b.body);
}

TEST_P(PerSuite, EmptyMessageIsInvalid) {
  EXPECT_EQ(code_of([&] { encrypt_email({}, keys_for(GetParam()).public_keys()); }),
            ErrorCode::kInvalidMessage);
}

TEST_P(PerSuite, AnyBitFlipBreaksSignature) {
  const auto& keys = keys_for(GetParam());
  const auto& m = bundled().messages[3];
  const auto sig = sign_email(m, keys);
  std::mt19937 rng(9);
  for (int i = 0; i < 16; ++i) {
    auto mm = m;
    mm[rng() % mm.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
    EXPECT_FALSE(verify_email(mm, sig, keys.public_keys()));
    auto bad = sig;
    bad.bytes[rng() % bad.bytes.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
    EXPECT_FALSE(verify_email(m, bad, keys.public_keys()));
  }
}

TEST_P(PerSuite, TamperedCiphertextIsAuthFailure) {
  const auto& keys = keys_for(GetParam());
  const auto ct = encrypt_email(as_bytes("attack at dawn"), keys.public_keys());
  auto body = ct;
  body.body[2] ^= 0x01;
  EXPECT_EQ(code_of([&] { decrypt_email(body, keys); }), ErrorCode::kAuthFailure);
  auto env = ct;
  env.wrapped_key[env.wrapped_key.size() / 2] ^= 0x80;
  EXPECT_EQ(code_of([&] { decrypt_email(env, keys); }), ErrorCode::kAuthFailure);
  auto nonce = ct;
  nonce.nonce[0] ^= 0x01;
  EXPECT_EQ(code_of([&] { decrypt_email(nonce, keys); }), ErrorCode::kAuthFailure);
  auto truncated = ct;
  truncated.wrapped_key.pop_back();
  EXPECT_EQ(code_of([&] { decrypt_email(truncated, keys); }), ErrorCode::kAuthFailure);
}

TEST_P(PerSuite, OtherKeyOfSameSuiteCannotDecrypt) {
  const auto other = keygen(GetParam(), 4242);
  const auto ct = encrypt_email(as_bytes("for someone else"), keys_for(GetParam()).public_keys());
  EXPECT_EQ(code_of([&] { decrypt_email(ct, other); }), ErrorCode::kAuthFailure);
  const auto sig = sign_email(as_bytes("m"), other);
  EXPECT_FALSE(verify_email(as_bytes("m"), sig, keys_for(GetParam()).public_keys()));
}

TEST(CrossSuite, KeyMisuseIsRejected) {
  for (auto a : kAllSuites) {
    for (auto b : kAllSuites) {
      if (a == b) continue;
      const auto sig = sign_email(as_bytes("hello"), keys_for(a));
      EXPECT_EQ(code_of([&] { verify_email(as_bytes("hello"), sig, keys_for(b).public_keys()); }),
                ErrorCode::kKeyMismatch);
      const auto ct = encrypt_email(as_bytes("hello"), keys_for(a).public_keys());
      EXPECT_EQ(code_of([&] { decrypt_email(ct, keys_for(b)); }), ErrorCode::kKeyMismatch);
    }
  }
}

TEST(Corpus, BundledHas200Messages) {
  EXPECT_EQ(bundled().size(), kBundledCorpusSize);
  for (const auto& m : bundled().messages) EXPECT_FALSE(m.empty());
}

TEST(Corpus, BundledMatchesGenerator) {
  const auto gen = generate_synthetic_corpus(kBundledCorpusSize, kBundledCorpusSeed);
  ASSERT_EQ(gen.size(), bundled().size());
  for (std::size_t i = 0; i < gen.size(); ++i) EXPECT_EQ(petcarbon::to_string(bundled().messages[i]), gen[i]);
}

TEST(Corpus, GeneratorIsDeterministic) {
  EXPECT_EQ(generate_synthetic_corpus(30, 1), generate_synthetic_corpus(30, 1));
  EXPECT_NE(generate_synthetic_corpus(30, 1), generate_synthetic_corpus(30, 2));
}

TEST(Corpus, EmptyDirectoryIsEmptyCorpus) {
  TempDir d("corpus");
  EXPECT_EQ(code_of([&] { load_corpus(d.path()); }), ErrorCode::kEmptyCorpus);
  d.write("blank.txt", "");
  d.write(".hidden", "ignored");
  EXPECT_EQ(code_of([&] { load_corpus(d.path()); }), ErrorCode::kEmptyCorpus);
}

TEST(Corpus, MissingDirectoryIsIoError) {
  EXPECT_EQ(code_of([] { load_corpus("/nonexistent/petcarbon/corpus"); }), ErrorCode::kIoError);
}

TEST(Corpus, NestedFoldersLoadInPathOrder) {
  TempDir d("corpus");
  d.write("b/sent_mail/2", "second-b");
  d.write("a/sent_mail/1", "first-a");
  d.write("a/sent_mail/10", "second-a");
  const auto c = load_corpus(d.path());
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(petcarbon::to_string(c.messages[0]), "first-a");
  EXPECT_EQ(petcarbon::to_string(c.messages[1]), "second-a");
  EXPECT_EQ(petcarbon::to_string(c.messages[2]), "second-b");
}

TEST(Corpus, WriteThenLoadRoundtrips) {
  TempDir d("corpus");
  const auto msgs = generate_synthetic_corpus(12, 3);
  write_corpus(d.path(), msgs);
  const auto c = load_corpus(d.path());
  ASSERT_EQ(c.size(), msgs.size());
  for (std::size_t i = 0; i < msgs.size(); ++i) EXPECT_EQ(petcarbon::to_string(c.messages[i]), msgs[i]);
}

TEST(CryptoWorkloads, PairShapeAndTaxonomy) {
  auto corpus = std::make_shared<EmailCorpus>(bundled());
  auto pair = crypto_suite_workloads(corpus, CipherSuite::kEcc, CryptoOp::kSign, 1);
  EXPECT_EQ(pair.private_variant->id(), "email-ecc-sign");
  EXPECT_EQ(pair.baseline->id(), pair.private_variant->id());
  EXPECT_EQ(pair.private_variant->variant(), harness::Variant::kPrivate);
  EXPECT_EQ(pair.baseline->variant(), harness::Variant::kPlaintext);
  EXPECT_EQ(pair.private_variant->taxonomy(),
            harness::Taxonomy{harness::Overhead::kComputational});
}

TEST(CryptoWorkloads, EmptyCorpusRejected) {
  EXPECT_EQ(code_of([] {
              crypto_suite_workloads(std::make_shared<EmailCorpus>(), CipherSuite::kRsa);
            }),
            ErrorCode::kEmptyCorpus);
}

TEST(CryptoWorkloads, RunsUnderSimulatedMeter) {
  auto corpus = std::make_shared<EmailCorpus>(bundled());
  meter::MeterConfig cfg;
  auto m = meter::Meter::open(cfg);
  for (auto op : {CryptoOp::kEncrypt, CryptoOp::kSign, CryptoOp::kEncryptAndSign}) {
    auto pair = crypto_suite_workloads(corpus, CipherSuite::kEcc, op, 2);
    harness::RunOptions opt;
    opt.iterations = 10;
    opt.warmup = 1;
    const auto r = harness::run_pair(*pair.private_variant, *pair.baseline, opt, m,
                                     carbon::IntensityTable::builtin().lookup("NL"));
    EXPECT_EQ(r.private_stats.n_runs, 10u);
    // A byte copy is far cheaper than any public-key operation.
    ASSERT_TRUE(r.overhead_ratio.has_value());
    EXPECT_GT(*r.overhead_ratio, 1.0);
  }
}

TEST(CryptoOps, ParseNames) {
  EXPECT_EQ(parse_crypto_op("encrypt"), CryptoOp::kEncrypt);
  EXPECT_EQ(parse_crypto_op("sign"), CryptoOp::kSign);
  EXPECT_EQ(parse_crypto_op("both"), CryptoOp::kEncryptAndSign);
  EXPECT_EQ(code_of([] { parse_crypto_op("x"); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace petcarbon::email

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

#include <chrono>
#include <cmath>

#include "petcarbon/common/splitmix.hpp"
#include "petcarbon/harness/runner.hpp"
#include "petcarbon/heml/paillier.hpp"
#include "petcarbon/heml/workloads.hpp"
#include "test_support.hpp"

namespace petcarbon::heml {
namespace {

using testing::code_of;

// One 2048-bit key shared by the slow tests.
const AheKeyPair& shared_keys() {
  static const AheKeyPair kp = ahe_keygen(2048, 99);
  return kp;
}

// Textbook decryption: m = L(c^lambda mod n^2) * mu mod n, no CRT.
mpz_class textbook_decrypt(const AheKeyPair& kp, const mpz_class& c) {
  const auto& n = kp.pub.n;
  mpz_class lambda, u, mu;
  const mpz_class p1 = kp.priv.p - 1, q1 = kp.priv.q - 1;
  mpz_lcm(lambda.get_mpz_t(), p1.get_mpz_t(), q1.get_mpz_t());
  mpz_powm(u.get_mpz_t(), c.get_mpz_t(), lambda.get_mpz_t(), kp.pub.n_squared.get_mpz_t());
  mpz_class gl;
  mpz_powm(gl.get_mpz_t(), kp.pub.g.get_mpz_t(), lambda.get_mpz_t(),
           kp.pub.n_squared.get_mpz_t());
  const mpz_class lg = (gl - 1) / n;
  mpz_invert(mu.get_mpz_t(), lg.get_mpz_t(), n.get_mpz_t());
  mpz_class m = ((u - 1) / n) * mu;
  mpz_mod(m.get_mpz_t(), m.get_mpz_t(), n.get_mpz_t());
  return m;
}

mpz_class mod(mpz_class a, const mpz_class& n) {
  mpz_mod(a.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  return a;
}

mpz_class random_mpz_below(SplitMix64& rng, const mpz_class& n) {
  mpz_class r = 0;
  for (std::size_t i = 0; i < mpz_sizeinbase(n.get_mpz_t(), 2) / 64 + 2; ++i) {
    r <<= 64;
    r += mpz_class(std::to_string(rng.next()));
  }
  return mod(r, n);
}

// ---- dataset ----

TEST(Dataset, ShapeAndDeterminism) {
  const auto a = gen_synthetic(100, 30, 7);
  EXPECT_EQ(a.n_samples, 100u);
  EXPECT_EQ(a.n_features, 30u);
  EXPECT_EQ(a.features.size(), 3000u);
  EXPECT_EQ(a.labels.size(), 100u);
  const auto b = gen_synthetic(100, 30, 7);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_NE(gen_synthetic(100, 30, 8).features, a.features);
}

TEST(Dataset, ColumnsAreStandardized) {
  const auto d = gen_synthetic(500, 12, 3);
  for (std::size_t j = 0; j < d.n_features; ++j) {
    double mean = 0, sq = 0;
    for (std::size_t i = 0; i < d.n_samples; ++i) mean += d.row(i)[j];
    mean /= 500;
    for (std::size_t i = 0; i < d.n_samples; ++i) sq += std::pow(d.row(i)[j] - mean, 2);
    EXPECT_NEAR(mean, 0, 1e-12);
    EXPECT_NEAR(sq / 500, 1, 1e-9);
  }
}

TEST(Dataset, LabelsBalancedOverManySeeds) {
  SplitMix64 rng(2024);
  for (int t = 0; t < 50; ++t) {
    const auto d = gen_synthetic(100, 30, rng.next());
    int pos = 0;
    for (int y : d.labels) {
      ASSERT_TRUE(y == 1 || y == -1);
      pos += y == 1;
    }
    EXPECT_GE(pos, 40);
    EXPECT_LE(pos, 60);
  }
}

TEST(Dataset, EmptyShapeRejected) {
  EXPECT_EQ(code_of([] { gen_synthetic(0, 3, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { gen_synthetic(3, 0, 1); }), ErrorCode::kInvalidArgument);
}

TEST(Dataset, SplitKeepsRows) {
  const auto d = gen_synthetic(10, 3, 1);
  const auto [train, test] = split(d, 0.8);
  EXPECT_EQ(train.n_samples, 8u);
  EXPECT_EQ(test.n_samples, 2u);
  EXPECT_EQ(test.row(0)[2], d.row(8)[2]);
  EXPECT_EQ(test.labels[1], d.labels[9]);
}

// ---- training ----

TEST(Logreg, HeldOutAccuracy) {
  for (std::size_t dim : kFeatureSweep) {
    const auto [train, test] = split(gen_synthetic(1000, dim, 100 + dim), 0.8);
    const auto m = train_plain_logreg(train);
    EXPECT_GE(accuracy(m, test), 0.9) << "d=" << dim;
  }
}

TEST(Logreg, TrainingAccuracyAtDeskScale) {
  for (std::size_t dim : kFeatureSweep) {
    const auto d = gen_synthetic(100, dim, 5);
    EXPECT_GE(accuracy(train_plain_logreg(d), d), 0.9) << "d=" << dim;
  }
}

TEST(Logreg, ZeroEpochsIsZeroModel) {
  const auto d = gen_synthetic(100, 5, 2);
  const auto m = train_plain_logreg(d, {0, 0.5});
  EXPECT_EQ(m.weights, std::vector<double>(5, 0.0));
  EXPECT_EQ(m.bias, 0.0);
  EXPECT_DOUBLE_EQ(accuracy(m, d), 0.5);
}

TEST(Logreg, Deterministic) {
  const auto d = gen_synthetic(200, 10, 4);
  const auto a = train_plain_logreg(d), b = train_plain_logreg(d);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(Logreg, AscentIsDivergence) {
  const auto d = gen_synthetic(100, 5, 2);
  EXPECT_EQ(code_of([&] { train_plain_logreg(d, {100, -0.5}); }), ErrorCode::kDivergenceDetected);
}

// ---- quantization ----

TEST(Quantize, Examples) {
  LinearModel m{{0.0, 1.5, -1.5, 0.03125}, 0.25};
  const auto q = quantize(m, 4);
  EXPECT_EQ(q.int_weights, (std::vector<std::int64_t>{0, 24, -24, 1}));  // 0.5 rounds away
  EXPECT_EQ(q.int_bias, 4);
  EXPECT_EQ(q.scale_bits, 4);
  const auto back = dequantize(q);
  EXPECT_EQ(back.weights[1], 1.5);
  EXPECT_EQ(back.bias, 0.25);
}

TEST(Quantize, ScaleRange) {
  LinearModel m{{1.0}, 0};
  EXPECT_EQ(code_of([&] { quantize(m, 3); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { quantize(m, 25); }), ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW(quantize(m, 4));
  EXPECT_NO_THROW(quantize(m, 24));
}

TEST(Quantize, OverflowAt2To31) {
  // 2^15 * 2^16 = 2^31
  EXPECT_EQ(code_of([] { quantize({{32768.0}, 0}, 16); }), ErrorCode::kOverflow);
  EXPECT_EQ(code_of([] { quantize({{0.0}, -32768.0}, 16); }), ErrorCode::kOverflow);
  EXPECT_EQ(quantize({{32767.99998}, 0}, 16).int_weights[0], (std::int64_t{1} << 31) - 1);
  EXPECT_EQ(code_of([] {
              const double x[] = {1e9};
              quantize_features(x, 16);
            }),
            ErrorCode::kOverflow);
  EXPECT_EQ(code_of([] { quantize({{NAN}, 0}, 16); }), ErrorCode::kOverflow);
}

TEST(Quantize, LabelAgreementWithRealModelAtScale16) {
  SplitMix64 rng(17);
  const std::size_t d = 30;
  LinearModel m;
  for (std::size_t i = 0; i < d; ++i) m.weights.push_back(rng.unit() * 2 - 1);
  m.bias = rng.unit() - 0.5;
  const auto q = quantize(m, 16);
  const auto data = gen_synthetic(1000, d, 18);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < data.n_samples; ++i) {
    agree += quantized_label(q, data.row(i)) == m.predict(data.row(i));
  }
  EXPECT_GE(agree, 990u);
}

TEST(Quantize, LabelAgreementOnTrainedModel) {
  const auto data = gen_synthetic(100, 30, 5);
  const auto real = train_plain_logreg(data);
  const auto q = quantize(real, 16);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < data.n_samples; ++i) {
    agree += quantized_label(q, data.row(i)) == real.predict(data.row(i));
  }
  EXPECT_GE(agree, 99u);
}

// With |w|, |x| <= 1 each product term is off by at most about 2^-s and the bias
// by 2^-(s+1), so a margin above (d + 1) * 2^-s keeps its sign.
TEST(Quantize, SignPreservedOutsideRoundingBand) {
  SplitMix64 rng(33);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t d = 1 + rng.below(40);
    const int s = kMinScaleBits + static_cast<int>(rng.below(kMaxScaleBits - kMinScaleBits + 1));
    LinearModel m;
    std::vector<double> x;
    for (std::size_t i = 0; i < d; ++i) {
      m.weights.push_back(rng.unit() * 2 - 1);
      x.push_back(rng.unit() * 2 - 1);
    }
    m.bias = rng.unit() * 2 - 1;
    const double real = m.score(x);
    if (std::fabs(real) <= std::ldexp(static_cast<double>(d + 1), -s)) continue;
    EXPECT_EQ(quantized_label(quantize(m, s), x), real >= 0 ? 1 : -1) << "d=" << d << " s=" << s;
  }
}

TEST(Quantize, ScoreIsExactIntegerDotProduct) {
  QuantizedLinearModel q{{1, -2}, 0, 4};
  const std::int64_t x[] = {3, 1};
  EXPECT_EQ(quantized_score(q, x), 1);
  q.int_bias = 3;
  EXPECT_EQ(quantized_score(q, x), 1 + 3 * 16);
  // Beyond 64 bits.
  QuantizedLinearModel big{std::vector<std::int64_t>(4, kIntLimit - 1), 0, 16};
  const std::int64_t bx[] = {kIntLimit - 1, kIntLimit - 1, kIntLimit - 1, kIntLimit - 1};
  mpz_class expect = kIntLimit - 1;
  expect *= expect;
  expect *= 4;
  EXPECT_EQ(quantized_score(big, bx), expect);
}

TEST(Quantize, JsonRoundTrip) {
  QuantizedLinearModel q{{5, -7, 0, (std::int64_t{1} << 31) - 1}, -12, 16};
  const auto text = to_json(q);
  EXPECT_NE(text.find("\"int_weights\""), std::string::npos);
  EXPECT_EQ(quantized_model_from_json(text), q);
  EXPECT_EQ(code_of([] { quantized_model_from_json("{"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { quantized_model_from_json(R"({"int_weights":[1],"int_bias":0})"); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] {
              quantized_model_from_json(R"({"int_weights":[1],"int_bias":0,"scale_bits":2})");
            }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] {
              quantized_model_from_json(
                  R"({"int_weights":[2147483648],"int_bias":0,"scale_bits":16})");
            }),
            ErrorCode::kInvalidArgument);
}

// ---- Paillier ----

TEST(Paillier, KnownAnswerDecryption) {
  // c = (1 + m n) r^n mod n^2 computed independently with Python's pow().
  const auto tiny = ahe_keypair_from_primes(7, 11);
  EXPECT_EQ(ahe_decrypt(tiny, {3840}), 42);
  const auto small = ahe_keypair_from_primes(1000003, 1000033);
  EXPECT_EQ(small.pub.n, mpz_class("1000036000099"));
  EXPECT_EQ(ahe_decrypt(small, {mpz_class("175878142126633516832989")}), 31337);
}

TEST(Paillier, KeyShape) {
  const auto& kp = shared_keys();
  EXPECT_EQ(kp.pub.bits(), 2048u);
  EXPECT_EQ(kp.pub.g, kp.pub.n + 1);
  EXPECT_EQ(kp.priv.p * kp.priv.q, kp.pub.n);
  EXPECT_NE(kp.priv.p, kp.priv.q);
  EXPECT_EQ(mpz_sizeinbase(kp.priv.p.get_mpz_t(), 2), 1024u);
  EXPECT_EQ(mpz_sizeinbase(kp.priv.q.get_mpz_t(), 2), 1024u);
  EXPECT_GT(mpz_probab_prime_p(kp.priv.p.get_mpz_t(), 50), 0);
  EXPECT_GT(mpz_probab_prime_p(kp.priv.q.get_mpz_t(), 50), 0);
}

TEST(Paillier, SeededKeygenIsReproducible) {
  EXPECT_EQ(ahe_keygen(2048, 99).pub.n, shared_keys().pub.n);
  EXPECT_NE(ahe_keygen(2048, 100).pub.n, shared_keys().pub.n);
  EXPECT_NE(ahe_keygen().pub.n, ahe_keygen().pub.n);
}

TEST(Paillier, KeySizeFloor) {
  EXPECT_EQ(code_of([] { ahe_keygen(1024); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { ahe_keygen(2049); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ahe_keygen(3072, 1).pub.bits(), 3072u);
}

TEST(Paillier, BasicExamples) {
  const auto& kp = shared_keys();
  EXPECT_EQ(ahe_decrypt(kp, ahe_encrypt(kp.pub, 0)), 0);
  const auto five = ahe_add(kp.pub, ahe_encrypt(kp.pub, 2), ahe_encrypt(kp.pub, 3));
  EXPECT_EQ(ahe_decrypt(kp, five), 5);
  const mpz_class top = kp.pub.n - 1;
  EXPECT_EQ(ahe_decrypt(kp, ahe_encrypt(kp.pub, top)), top);
}

TEST(Paillier, EncryptionIsRandomized) {
  const auto& kp = shared_keys();
  const auto a = ahe_encrypt(kp.pub, 7), b = ahe_encrypt(kp.pub, 7);
  EXPECT_NE(a, b);
  EXPECT_EQ(ahe_decrypt(kp, a), ahe_decrypt(kp, b));
}

TEST(Paillier, PlaintextRange) {
  const auto& kp = shared_keys();
  EXPECT_EQ(code_of([&] { ahe_encrypt(kp.pub, -1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { ahe_encrypt(kp.pub, kp.pub.n); }), ErrorCode::kInvalidArgument);
}

TEST(Paillier, InvalidCiphertexts) {
  const auto& kp = shared_keys();
  const std::vector<mpz_class> bad{0,        kp.pub.n_squared, kp.pub.n_squared + 5, -3,
                                   kp.pub.n, kp.priv.p,        kp.priv.q * 12345};
  for (const auto& c : bad) {
    EXPECT_EQ(code_of([&] { ahe_decrypt(kp, {c}); }), ErrorCode::kInvalidCiphertext) << c;
    EXPECT_EQ(code_of([&] { ahe_add(kp.pub, {c}, ahe_encrypt(kp.pub, 1)); }),
              ErrorCode::kInvalidCiphertext);
    EXPECT_EQ(code_of([&] { ahe_scalar_mul(kp.pub, {c}, 3); }), ErrorCode::kInvalidCiphertext);
  }
}

TEST(Paillier, HomomorphismMatchesBigIntegerOracle) {
  const auto& kp = shared_keys();
  const auto& n = kp.pub.n;
  SplitMix64 rng(4242);
  for (int t = 0; t < 1000; ++t) {
    const mpz_class a = random_mpz_below(rng, n);
    const mpz_class b = random_mpz_below(rng, n);
    // Mix of small signed, huge and boundary scalars.
    mpz_class k;
    switch (t % 4) {
      case 0: k = static_cast<long>(rng.next() % (1u << 31)) - (1l << 30); break;
      case 1: k = random_mpz_below(rng, n); break;
      case 2: k = -random_mpz_below(rng, n); break;
      default: k = t % 8 == 3 ? 0 : -1; break;
    }
    const auto ca = ahe_encrypt(kp.pub, a), cb = ahe_encrypt(kp.pub, b);
    const auto sum = ahe_add(kp.pub, ca, cb);
    const auto prod = ahe_scalar_mul(kp.pub, ca, k);
    ASSERT_EQ(ahe_decrypt(kp, sum), mod(a + b, n)) << t;
    ASSERT_EQ(ahe_decrypt(kp, prod), mod(k * a, n)) << t;
    if (t % 25 == 0) {
      // Independent decryption path on a subset.
      ASSERT_EQ(textbook_decrypt(kp, sum.value), mod(a + b, n));
      ASSERT_EQ(textbook_decrypt(kp, prod.value), mod(k * a, n));
      ASSERT_EQ(ahe_decrypt(kp, ahe_add_plain(kp.pub, cb, k)), mod(b + k, n));
    }
  }
}

TEST(Paillier, SignedEncoding) {
  const auto pub = AhePublicKey::from_modulus(77);
  for (int v = -38; v <= 38; ++v) {
    EXPECT_EQ(decode_signed(pub, encode_signed(pub, v)), v);
  }
  EXPECT_EQ(encode_signed(pub, -1), 76);
  EXPECT_EQ(decode_signed(pub, 38), 38);
  EXPECT_EQ(decode_signed(pub, 39), -38);
  EXPECT_EQ(code_of([] { AhePublicKey::from_modulus(76); }), ErrorCode::kInvalidArgument);
}

// ---- encrypted inference ----

TEST(HeInference, ZeroWeightsScoreZero) {
  const auto& kp = shared_keys();
  QuantizedLinearModel q{{0, 0, 0}, 0, 16};
  const std::int64_t x[] = {123, -4, 99999};
  EXPECT_EQ(decrypt_score(kp, he_inference(kp.pub, encrypt_features(kp.pub, x), q)), 0);
}

TEST(HeInference, ToyExample) {
  const auto& kp = shared_keys();
  QuantizedLinearModel q{{1, -2}, 0, 4};
  const std::int64_t x[] = {3, 1};
  EXPECT_EQ(decrypt_score(kp, he_inference(kp.pub, encrypt_features(kp.pub, x), q)), 1);
  q.int_bias = -1;
  EXPECT_EQ(decrypt_score(kp, he_inference(kp.pub, encrypt_features(kp.pub, x), q)), 1 - 16);
}

TEST(HeInference, LengthMismatch) {
  const auto& kp = shared_keys();
  QuantizedLinearModel q{{1, 2}, 0, 4};
  const std::int64_t x[] = {3};
  EXPECT_EQ(code_of([&] { he_inference(kp.pub, encrypt_features(kp.pub, x), q); }),
            ErrorCode::kInvalidArgument);
}

TEST(HeInference, OverflowWhenScoreCanWrap) {
  // n = 7 * 11: even w = 1 allows |score| up to 2^31 - 1 >= n / 2.
  const auto tiny = ahe_keypair_from_primes(7, 11);
  QuantizedLinearModel q{{1}, 0, 4};
  const AheCiphertext x[] = {{1}};
  EXPECT_EQ(code_of([&] { he_inference(tiny.pub, x, q); }), ErrorCode::kOverflow);
}

TEST(HeInference, MatchesPlaintextOracleOnHundredSamples) {
  const auto model = prepare_heml(100, 10, 21);
  const auto& kp = shared_keys();
  std::size_t same = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto x = quantize_features(model.data->row(i), model.quantized.scale_bits);
    const auto score = decrypt_score(kp, he_inference(kp.pub, encrypt_features(kp.pub, x),
                                                      model.quantized));
    ASSERT_EQ(score, quantized_score(model.quantized, x)) << i;
    same += label_of(score) == quantized_label(model.quantized, model.data->row(i));
  }
  EXPECT_EQ(same, 100u);
}

// ---- workloads ----

TEST(HemlWorkloads, Shape) {
  const auto model = prepare_heml(20, 10, 1);
  auto pair = heml_suite_workloads(model, {4, 2048, 5});
  EXPECT_EQ(pair.private_variant->id(), "heml-d10-b4");
  EXPECT_EQ(pair.baseline->id(), "heml-d10-b4");
  EXPECT_EQ(pair.private_variant->variant(), harness::Variant::kPrivate);
  EXPECT_EQ(pair.baseline->variant(), harness::Variant::kPlaintext);
  EXPECT_EQ(pair.private_variant->taxonomy(), harness::Taxonomy{harness::Overhead::kComputational});
  EXPECT_EQ(code_of([&] { heml_suite_workloads(model, {0, 2048, std::nullopt}); }), ErrorCode::kInvalidArgument);
  auto bad = model;
  bad.quantized.int_weights.pop_back();
  EXPECT_EQ(code_of([&] { heml_suite_workloads(bad); }), ErrorCode::kInvalidArgument);
}

TEST(HemlWorkloads, PairUnderSimulatedMeter) {
  const auto model = prepare_heml(30, 10, 2);
  auto pair = heml_suite_workloads(model, {1, 2048, 6});
  meter::MeterConfig cfg;
  auto m = meter::Meter::open(cfg);
  harness::RunOptions opt;
  opt.iterations = 10;
  opt.warmup = 1;
  const auto r = harness::run_pair(*pair.private_variant, *pair.baseline, opt, m,
                                   carbon::IntensityTable::builtin().lookup("NL"));
  ASSERT_TRUE(r.overhead_ratio);
  EXPECT_GT(*r.overhead_ratio, 10.0);
}

}  // namespace
}  // namespace petcarbon::heml

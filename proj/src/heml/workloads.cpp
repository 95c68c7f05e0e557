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

#include "petcarbon/heml/workloads.hpp"

#include <string>

#include "petcarbon/common/error.hpp"
#include "petcarbon/heml/paillier.hpp"

namespace petcarbon::heml {

namespace {

using harness::Overhead;
using harness::Variant;

class EncryptedInference final : public harness::Workload {
 public:
  EncryptedInference(std::string id, HemlModel model, HemlOptions options)
      : id_(std::move(id)), model_(std::move(model)), options_(options) {}

  std::string id() const override { return id_; }
  Variant variant() const override { return Variant::kPrivate; }
  harness::Taxonomy taxonomy() const override { return {Overhead::kComputational}; }

  void setup() override {
    if (!keys_) keys_ = std::make_unique<AheKeyPair>(ahe_keygen(options_.key_bits, options_.key_seed));
    if (expected_.empty()) {
      const auto& data = *model_.data;
      expected_.reserve(data.n_samples);
      for (std::size_t i = 0; i < data.n_samples; ++i) {
        expected_.push_back(quantized_label(model_.quantized, data.row(i)));
      }
    }
  }

  void run_once() override {
    const auto& data = *model_.data;
    for (std::size_t b = 0; b < options_.batch; ++b) {
      const std::size_t i = next_++ % data.n_samples;
      const auto x = quantize_features(data.row(i), model_.quantized.scale_bits);
      const auto enc = encrypt_features(keys_->pub, x);
      const auto score = he_inference(keys_->pub, enc, model_.quantized);
      if (label_of(decrypt_score(*keys_, score)) != expected_[i]) {
        throw Error(ErrorCode::kCryptoFailure,
                    id_ + ": encrypted label differs from plaintext label on sample " +
                        std::to_string(i));
      }
    }
  }

 private:
  std::string id_;
  HemlModel model_;
  HemlOptions options_;
  std::unique_ptr<AheKeyPair> keys_;
  std::vector<int> expected_;
  std::size_t next_ = 0;
};

class PlainInference final : public harness::Workload {
 public:
  PlainInference(std::string id, HemlModel model, std::size_t batch)
      : id_(std::move(id)), model_(std::move(model)), batch_(batch) {}

  std::string id() const override { return id_; }
  Variant variant() const override { return Variant::kPlaintext; }
  harness::Taxonomy taxonomy() const override { return {Overhead::kComputational}; }

  void run_once() override {
    const auto& data = *model_.data;
    int acc = 0;
    for (std::size_t b = 0; b < batch_; ++b) {
      acc += model_.real.predict(data.row(next_++ % data.n_samples));
    }
    sink_ = sink_ + acc;
  }

 private:
  std::string id_;
  HemlModel model_;
  std::size_t batch_;
  std::size_t next_ = 0;
  volatile int sink_ = 0;
};

}  // namespace

HemlModel prepare_heml(std::size_t n_samples, std::size_t n_features, std::uint64_t seed,
                       int scale_bits) {
  HemlModel m;
  auto data = std::make_shared<SyntheticDataset>(gen_synthetic(n_samples, n_features, seed));
  m.real = train_plain_logreg(*data);
  m.quantized = quantize(m.real, scale_bits);
  m.data = std::move(data);
  return m;
}

harness::WorkloadPair heml_suite_workloads(const HemlModel& model, const HemlOptions& options) {
  if (!model.data || model.data->n_samples == 0) {
    throw Error(ErrorCode::kInvalidArgument, "heml workloads need a non-empty dataset");
  }
  if (model.quantized.dimension() != model.data->n_features ||
      model.real.weights.size() != model.data->n_features) {
    throw Error(ErrorCode::kInvalidArgument, "model dimension does not match the dataset");
  }
  if (options.batch == 0) throw Error(ErrorCode::kInvalidArgument, "batch must be >= 1");
  const std::string id = "heml-d" + std::to_string(model.data->n_features) + "-b" +
                         std::to_string(options.batch);
  harness::WorkloadPair pair;
  pair.private_variant = std::make_unique<EncryptedInference>(id, model, options);
  pair.baseline = std::make_unique<PlainInference>(id, model, options.batch);
  return pair;
}

}  // namespace petcarbon::heml

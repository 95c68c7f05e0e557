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

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>

#include "petcarbon/harness/workload.hpp"
#include "petcarbon/heml/dataset.hpp"
#include "petcarbon/heml/model.hpp"

namespace petcarbon::heml {

/// Feature counts of the encrypted-inference sweep.
inline constexpr std::array<std::size_t, 4> kFeatureSweep{10, 30, 100, 200};

/// Dataset, trained model and its quantization.
struct HemlModel {
  std::shared_ptr<const SyntheticDataset> data;
  LinearModel real;
  QuantizedLinearModel quantized;
};

HemlModel prepare_heml(std::size_t n_samples, std::size_t n_features, std::uint64_t seed,
                       int scale_bits = kDefaultScaleBits);

struct HemlOptions {
  std::size_t batch = 1;  // samples per measured run
  std::size_t key_bits = 2048;
  std::optional<std::uint64_t> key_seed;
};

/// PRIVATE: per sample, encrypt the quantized features, evaluate the model
/// homomorphically, decrypt; the label must equal the plaintext quantized label
/// (CryptoFailure otherwise). Keys are generated in setup().
/// PLAINTEXT: real-valued dot product and sign. Samples are taken round-robin.
/// Taxonomy COMPUTATIONAL. Id heml-d<d>-b<batch>.
harness::WorkloadPair heml_suite_workloads(const HemlModel& model, const HemlOptions& options = {});

}  // namespace petcarbon::heml

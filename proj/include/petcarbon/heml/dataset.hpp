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

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace petcarbon::heml {

struct SyntheticDataset {
  std::size_t n_samples = 0;
  std::size_t n_features = 0;
  std::vector<double> features;  // row-major n_samples x n_features
  std::vector<int> labels;       // +1 / -1
  std::uint64_t seed = 0;

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * n_features, n_features};
  }
};

/// Two Gaussian classes offset along a random unit direction, then each column
/// standardized to zero mean and unit variance. Exactly half the samples (rounded
/// up) are labelled +1. Same seed, same bytes on every platform.
SyntheticDataset gen_synthetic(std::size_t n_samples, std::size_t n_features, std::uint64_t seed);

/// First round(n * fraction) rows and the rest. Rows are already shuffled.
std::pair<SyntheticDataset, SyntheticDataset> split(const SyntheticDataset& data,
                                                    double train_fraction);

}  // namespace petcarbon::heml

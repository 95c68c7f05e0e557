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

#include "petcarbon/heml/dataset.hpp"

#include <cmath>
#include <numbers>

#include "petcarbon/common/error.hpp"
#include "petcarbon/common/splitmix.hpp"

namespace petcarbon::heml {

namespace {

// Class means sit at +-kSeparation along the planted direction, in units of the
// per-coordinate noise.
constexpr double kSeparation = 2.5;

double gaussian(SplitMix64& rng) {
  const double u1 = 1.0 - rng.unit();  // (0, 1]
  const double u2 = rng.unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

SyntheticDataset gen_synthetic(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) {
    throw Error(ErrorCode::kInvalidArgument, "dataset needs at least one sample and one feature");
  }
  SplitMix64 rng(seed);
  SyntheticDataset out;
  out.n_samples = n;
  out.n_features = d;
  out.seed = seed;

  std::vector<double> direction(d);
  double norm = 0;
  while (norm == 0) {
    for (auto& v : direction) v = gaussian(rng);
    norm = 0;
    for (double v : direction) norm += v * v;
  }
  norm = std::sqrt(norm);
  for (auto& v : direction) v /= norm;

  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = i < (n + 1) / 2 ? 1 : -1;
  for (std::size_t i = n - 1; i > 0; --i) std::swap(out.labels[i], out.labels[rng.below(i + 1)]);

  out.features.resize(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const double offset = kSeparation * out.labels[i];
    for (std::size_t j = 0; j < d; ++j) {
      out.features[i * d + j] = offset * direction[j] + gaussian(rng);
    }
  }

  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0;
    for (std::size_t i = 0; i < n; ++i) mean += out.features[i * d + j];
    mean /= static_cast<double>(n);
    double var = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = out.features[i * d + j] - mean;
      var += c * c;
    }
    var /= static_cast<double>(n);
    const double inv = var > 0 ? 1.0 / std::sqrt(var) : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      out.features[i * d + j] = (out.features[i * d + j] - mean) * inv;
    }
  }
  return out;
}

std::pair<SyntheticDataset, SyntheticDataset> split(const SyntheticDataset& data,
                                                    double train_fraction) {
  if (!(train_fraction > 0 && train_fraction < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "train fraction must be in (0, 1)");
  }
  const auto cut = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(data.n_samples)));
  if (cut == 0 || cut >= data.n_samples) {
    throw Error(ErrorCode::kInvalidArgument, "split leaves one side empty");
  }
  auto part = [&](std::size_t lo, std::size_t hi) {
    SyntheticDataset s;
    s.n_samples = hi - lo;
    s.n_features = data.n_features;
    s.seed = data.seed;
    s.features.assign(data.features.begin() + static_cast<std::ptrdiff_t>(lo * data.n_features),
                      data.features.begin() + static_cast<std::ptrdiff_t>(hi * data.n_features));
    s.labels.assign(data.labels.begin() + static_cast<std::ptrdiff_t>(lo),
                    data.labels.begin() + static_cast<std::ptrdiff_t>(hi));
    return s;
  };
  return {part(0, cut), part(cut, data.n_samples)};
}

}  // namespace petcarbon::heml

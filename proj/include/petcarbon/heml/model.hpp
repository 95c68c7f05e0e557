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

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "petcarbon/heml/dataset.hpp"

namespace petcarbon::heml {

struct LinearModel {
  std::vector<double> weights;
  double bias = 0;

  double score(std::span<const double> x) const;
  /// +1 when score >= 0.
  int predict(std::span<const double> x) const { return score(x) >= 0 ? 1 : -1; }
};

struct TrainOptions {
  std::size_t epochs = 200;
  double learning_rate = 0.5;
};

/// Full-batch gradient descent on the mean logistic loss. DivergenceDetected if
/// the loss rises for 10 consecutive epochs or stops being finite.
LinearModel train_plain_logreg(const SyntheticDataset& data, const TrainOptions& options = {});

double accuracy(const LinearModel& model, const SyntheticDataset& data);

inline constexpr int kMinScaleBits = 4;
inline constexpr int kMaxScaleBits = 24;
inline constexpr int kDefaultScaleBits = 16;
inline constexpr std::int64_t kIntLimit = std::int64_t{1} << 31;

struct QuantizedLinearModel {
  std::vector<std::int64_t> int_weights;
  std::int64_t int_bias = 0;
  int scale_bits = kDefaultScaleBits;

  std::size_t dimension() const { return int_weights.size(); }
  bool operator==(const QuantizedLinearModel&) const = default;
};

/// int = round(w * 2^scale_bits). Overflow if any |int| >= 2^31.
QuantizedLinearModel quantize(const LinearModel& model, int scale_bits = kDefaultScaleBits);
LinearModel dequantize(const QuantizedLinearModel& model);

/// Client-side encoding of one feature vector at the model's scale; same
/// rounding and Overflow rule as the weights.
std::vector<std::int64_t> quantize_features(std::span<const double> x, int scale_bits);

/// sum(int_w * int_x) + int_bias * 2^scale_bits, exact.
mpz_class quantized_score(const QuantizedLinearModel& model, std::span<const std::int64_t> x);

/// +1 when score >= 0.
inline int label_of(const mpz_class& score) { return sgn(score) >= 0 ? 1 : -1; }

int quantized_label(const QuantizedLinearModel& model, std::span<const double> x);

/// {"int_weights": [...], "int_bias": b, "scale_bits": s}
std::string to_json(const QuantizedLinearModel& model);
/// InvalidArgument on malformed input or an out-of-range field.
QuantizedLinearModel quantized_model_from_json(std::string_view text);

}  // namespace petcarbon::heml

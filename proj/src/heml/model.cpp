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

#include "petcarbon/heml/model.hpp"

#include <cmath>
#include <limits>
#include <json.hpp>

#include "petcarbon/common/error.hpp"

namespace petcarbon::heml {

namespace {

constexpr std::size_t kDivergencePatience = 10;

// log(1 + exp(-m)) without overflow for large |m|.
double logistic_loss(double margin) {
  return margin > 0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_scale(int scale_bits) {
  if (scale_bits < kMinScaleBits || scale_bits > kMaxScaleBits) {
    throw Error(ErrorCode::kInvalidArgument,
                "scale_bits " + std::to_string(scale_bits) + " outside [4, 24]");
  }
}

std::int64_t to_fixed(double v, int scale_bits, const char* what) {
  const double scaled = std::round(std::ldexp(v, scale_bits));
  if (!std::isfinite(scaled) || std::fabs(scaled) >= static_cast<double>(kIntLimit)) {
    throw Error(ErrorCode::kOverflow, std::string(what) + " " + std::to_string(v) +
                                          " does not fit 31 bits at scale " +
                                          std::to_string(scale_bits));
  }
  return static_cast<std::int64_t>(scaled);
}

}  // namespace

double LinearModel::score(std::span<const double> x) const {
  double s = bias;
  for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * x[i];
  return s;
}

LinearModel train_plain_logreg(const SyntheticDataset& data, const TrainOptions& options) {
  const std::size_t n = data.n_samples, d = data.n_features;
  if (n == 0 || d == 0 || data.features.size() != n * d || data.labels.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "malformed dataset");
  }
  LinearModel m;
  m.weights.assign(d, 0.0);
  std::vector<double> grad(d);
  double prev_loss = std::numeric_limits<double>::infinity();
  std::size_t rising = 0;
  const double inv_n = 1.0 / static_cast<double>(n);

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0, loss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = data.row(i);
      const double y = data.labels[i];
      const double margin = y * m.score(x);
      loss += logistic_loss(margin);
      // d/dz log(1 + exp(-y z)) = -y * sigmoid(-y z)
      const double g = -y * sigmoid(-margin);
      for (std::size_t j = 0; j < d; ++j) grad[j] += g * x[j];
      grad_b += g;
    }
    loss *= inv_n;
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDivergenceDetected, "loss is not finite at epoch " +
                                                      std::to_string(epoch));
    }
    rising = loss > prev_loss ? rising + 1 : 0;
    if (rising >= kDivergencePatience) {
      throw Error(ErrorCode::kDivergenceDetected,
                  "loss rose for 10 consecutive epochs (learning rate " +
                      std::to_string(options.learning_rate) + ")");
    }
    prev_loss = loss;
    for (std::size_t j = 0; j < d; ++j) m.weights[j] -= options.learning_rate * grad[j] * inv_n;
    m.bias -= options.learning_rate * grad_b * inv_n;
  }
  return m;
}

double accuracy(const LinearModel& model, const SyntheticDataset& data) {
  if (data.n_samples == 0) return 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.n_samples; ++i) {
    hits += model.predict(data.row(i)) == data.labels[i];
  }
  return static_cast<double>(hits) / static_cast<double>(data.n_samples);
}

QuantizedLinearModel quantize(const LinearModel& model, int scale_bits) {
  check_scale(scale_bits);
  QuantizedLinearModel q;
  q.scale_bits = scale_bits;
  q.int_weights.reserve(model.weights.size());
  for (double w : model.weights) q.int_weights.push_back(to_fixed(w, scale_bits, "weight"));
  q.int_bias = to_fixed(model.bias, scale_bits, "bias");
  return q;
}

LinearModel dequantize(const QuantizedLinearModel& model) {
  LinearModel m;
  m.weights.reserve(model.int_weights.size());
  for (auto w : model.int_weights) {
    m.weights.push_back(std::ldexp(static_cast<double>(w), -model.scale_bits));
  }
  m.bias = std::ldexp(static_cast<double>(model.int_bias), -model.scale_bits);
  return m;
}

std::vector<std::int64_t> quantize_features(std::span<const double> x, int scale_bits) {
  check_scale(scale_bits);
  std::vector<std::int64_t> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(to_fixed(v, scale_bits, "feature"));
  return out;
}

mpz_class quantized_score(const QuantizedLinearModel& model, std::span<const std::int64_t> x) {
  if (x.size() != model.dimension()) {
    throw Error(ErrorCode::kInvalidArgument, "feature vector length " + std::to_string(x.size()) +
                                                 " != model dimension " +
                                                 std::to_string(model.dimension()));
  }
  mpz_class acc = 0, term;
  for (std::size_t i = 0; i < x.size(); ++i) {
    term = static_cast<long>(model.int_weights[i]);
    term *= static_cast<long>(x[i]);
    acc += term;
  }
  mpz_class bias = static_cast<long>(model.int_bias);
  mpz_mul_2exp(bias.get_mpz_t(), bias.get_mpz_t(), static_cast<mp_bitcnt_t>(model.scale_bits));
  return acc + bias;
}

int quantized_label(const QuantizedLinearModel& model, std::span<const double> x) {
  return label_of(quantized_score(model, quantize_features(x, model.scale_bits)));
}

std::string to_json(const QuantizedLinearModel& model) {
  nlohmann::json j;
  j["int_weights"] = model.int_weights;
  j["int_bias"] = model.int_bias;
  j["scale_bits"] = model.scale_bits;
  return j.dump(2);
}

QuantizedLinearModel quantized_model_from_json(std::string_view text) {
  QuantizedLinearModel q;
  try {
    const auto j = nlohmann::json::parse(text);
    q.int_weights = j.at("int_weights").get<std::vector<std::int64_t>>();
    q.int_bias = j.at("int_bias").get<std::int64_t>();
    q.scale_bits = j.at("scale_bits").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("model json: ") + e.what());
  }
  check_scale(q.scale_bits);
  auto fits = [](std::int64_t v) { return v > -kIntLimit && v < kIntLimit; };
  if (!fits(q.int_bias)) throw Error(ErrorCode::kInvalidArgument, "model json: bias out of range");
  for (auto w : q.int_weights) {
    if (!fits(w)) throw Error(ErrorCode::kInvalidArgument, "model json: weight out of range");
  }
  return q;
}

}  // namespace petcarbon::heml

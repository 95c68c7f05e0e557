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

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace petcarbon::harness {

enum class Variant { kPrivate, kPlaintext };

/// Overhead classes a privacy enhancement can introduce.
enum class Overhead { kComputational, kCommunication, kInfrastructure, kHardware };

using Taxonomy = std::set<Overhead>;

std::string_view to_string(Variant v);
std::string_view to_string(Overhead o);
Variant parse_variant(std::string_view s);
Overhead parse_overhead(std::string_view s);

/// One side of a benchmark pair. Only run_once() is measured; setup() and
/// teardown() run outside every energy window.
class Workload {
 public:
  virtual ~Workload() = default;

  virtual std::string id() const = 0;
  virtual Variant variant() const = 0;
  virtual Taxonomy taxonomy() const = 0;

  virtual void setup() {}
  virtual void run_once() = 0;
  virtual void teardown() {}
};

struct WorkloadPair {
  std::unique_ptr<Workload> private_variant;
  std::unique_ptr<Workload> baseline;
};

/// Adapts callables into a Workload; used by tests and small suites.
class FunctionWorkload final : public Workload {
 public:
  FunctionWorkload(std::string id, Variant variant, Taxonomy taxonomy,
                   std::function<void()> run, std::function<void()> setup = {},
                   std::function<void()> teardown = {})
      : id_(std::move(id)),
        variant_(variant),
        taxonomy_(std::move(taxonomy)),
        run_(std::move(run)),
        setup_(std::move(setup)),
        teardown_(std::move(teardown)) {}

  std::string id() const override { return id_; }
  Variant variant() const override { return variant_; }
  Taxonomy taxonomy() const override { return taxonomy_; }
  void setup() override {
    if (setup_) setup_();
  }
  void run_once() override { run_(); }
  void teardown() override {
    if (teardown_) teardown_();
  }

 private:
  std::string id_;
  Variant variant_;
  Taxonomy taxonomy_;
  std::function<void()> run_;
  std::function<void()> setup_;
  std::function<void()> teardown_;
};

}  // namespace petcarbon::harness

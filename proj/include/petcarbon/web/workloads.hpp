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
#include <memory>
#include <string>

#include "petcarbon/harness/workload.hpp"
#include "petcarbon/web/http.hpp"

namespace petcarbon::web {

struct WebSuiteOptions {
  std::size_t requests_per_run = 1;
  ConnectionPolicy policy = ConnectionPolicy::kFreshPerRequest;
};

/// Starts a loopback server in setup() and fetches the next requests_per_run
/// snapshot resources (round-robin) per run. Client and server share the host
/// and therefore the measurement window.
class WebWorkload final : public harness::Workload {
 public:
  WebWorkload(std::string id, Mode mode, SiteSnapshot site, WebSuiteOptions options);
  ~WebWorkload() override;

  std::string id() const override { return id_; }
  harness::Variant variant() const override;
  harness::Taxonomy taxonomy() const override;

  void setup() override;
  void run_once() override;
  void teardown() override;

  const FetchStats& totals() const { return totals_; }
  /// Server-side accepted connections, valid until teardown.
  std::size_t server_connections() const;

 private:
  std::string id_;
  Mode mode_;
  SiteSnapshot site_;
  WebSuiteOptions options_;
  std::vector<std::string> sequence_;
  std::size_t next_ = 0;
  std::unique_ptr<StaticServer> server_;
  std::unique_ptr<Fetcher> fetcher_;
  FetchStats totals_;
};

/// PRIVATE = HTTPS (TLS 1.3), PLAINTEXT = HTTP over the same sequence.
/// Taxonomy COMPUTATIONAL. Id: web-<fresh|keepalive>.
harness::WorkloadPair web_suite_workloads(const SiteSnapshot& site,
                                          const WebSuiteOptions& options = {});

}  // namespace petcarbon::web

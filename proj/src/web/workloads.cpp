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

#include "petcarbon/web/workloads.hpp"

#include "petcarbon/common/error.hpp"

namespace petcarbon::web {

WebWorkload::WebWorkload(std::string id, Mode mode, SiteSnapshot site, WebSuiteOptions options)
    : id_(std::move(id)), mode_(mode), site_(std::move(site)), options_(options) {
  if (options_.requests_per_run < 1) {
    throw Error(ErrorCode::kInvalidArgument, "requests_per_run must be >= 1");
  }
  sequence_ = request_sequence(site_, site_.resources.size());
}

WebWorkload::~WebWorkload() = default;

harness::Variant WebWorkload::variant() const {
  return mode_ == Mode::kHttp ? harness::Variant::kPlaintext : harness::Variant::kPrivate;
}

harness::Taxonomy WebWorkload::taxonomy() const { return {harness::Overhead::kComputational}; }

void WebWorkload::setup() {
  WebServerConfig cfg;
  cfg.mode = mode_;
  server_ = StaticServer::start(site_, cfg);
  ClientTarget target{mode_, server_->host(), server_->port(), server_->cert_pem()};
  fetcher_ = std::make_unique<Fetcher>(target, options_.policy);
  next_ = 0;
  totals_ = {};
}

void WebWorkload::run_once() {
  for (std::size_t i = 0; i < options_.requests_per_run; ++i) {
    const auto& path = sequence_[next_++ % sequence_.size()];
    const int status = fetcher_->get(path, totals_);
    if (status != 200) {
      throw Error(ErrorCode::kConnectFailure, path + ": HTTP status " + std::to_string(status));
    }
  }
}

void WebWorkload::teardown() {
  fetcher_.reset();
  if (server_) server_->stop();
}

std::size_t WebWorkload::server_connections() const {
  return server_ ? server_->connections() : 0;
}

harness::WorkloadPair web_suite_workloads(const SiteSnapshot& site,
                                          const WebSuiteOptions& options) {
  const std::string id = std::string("web-") +
                         (options.policy == ConnectionPolicy::kKeepAlive ? "keepalive" : "fresh");
  harness::WorkloadPair pair;
  pair.private_variant = std::make_unique<WebWorkload>(id, Mode::kHttpsTls13, site, options);
  pair.baseline = std::make_unique<WebWorkload>(id, Mode::kHttp, site, options);
  return pair;
}

}  // namespace petcarbon::web

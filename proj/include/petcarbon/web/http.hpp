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
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "petcarbon/web/site.hpp"

namespace petcarbon::web {

enum class Mode { kHttp, kHttpsTls13 };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);  // "http" | "https"

/// Self-signed P-256 certificate for localhost and 127.0.0.1.
struct TlsIdentity {
  std::string cert_pem;
  std::string key_pem;

  static TlsIdentity self_signed();
};

struct WebServerConfig {
  Mode mode = Mode::kHttp;
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port
  /// HTTPS only. Both or neither; when neither, a self-signed identity is
  /// generated at start.
  std::optional<std::filesystem::path> tls_cert;
  std::optional<std::filesystem::path> tls_key;
  std::size_t threads = 4;
};

/// Serves a snapshot's bytes from memory. start() returns once the listening
/// socket is accepting; TLS is pinned to version 1.3.
class StaticServer {
 public:
  /// BindFailure, TlsConfigError, IoError.
  static std::unique_ptr<StaticServer> start(const SiteSnapshot& site,
                                             const WebServerConfig& config);
  ~StaticServer();
  StaticServer(const StaticServer&) = delete;
  StaticServer& operator=(const StaticServer&) = delete;

  Mode mode() const;
  const std::string& host() const;
  int port() const;
  /// PEM of the serving certificate (HTTPS), for client pinning.
  const std::string& cert_pem() const;
  /// Accepted TCP connections since start.
  std::size_t connections() const;
  void stop();

 private:
  struct Impl;
  explicit StaticServer(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

enum class ConnectionPolicy { kFreshPerRequest, kKeepAlive };

struct ClientTarget {
  Mode mode = Mode::kHttp;
  std::string host = "127.0.0.1";
  int port = 0;
  std::string pinned_cert_pem;  // HTTPS: the only trusted certificate
};

struct FetchStats {
  std::size_t requests = 0;
  std::size_t bytes = 0;  // response body bytes
  std::map<int, std::size_t> statuses;

  std::size_t count(int status) const;
};

using BodyCallback = std::function<void(const std::string& path, int status, std::string_view)>;

/// Sequential client. The TLS context and trust store are built once; with
/// kFreshPerRequest each request opens a new connection (full handshake).
class Fetcher {
 public:
  Fetcher(ClientTarget target, ConnectionPolicy policy);
  ~Fetcher();
  Fetcher(const Fetcher&) = delete;
  Fetcher& operator=(const Fetcher&) = delete;

  /// ConnectFailure, TlsHandshakeFailure.
  int get(const std::string& path, FetchStats& stats, const BodyCallback& on_body = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// InvalidArgument on an empty path list.
FetchStats fetch_batch(const std::vector<std::string>& paths, const ClientTarget& target,
                       ConnectionPolicy policy = ConnectionPolicy::kFreshPerRequest,
                       const BodyCallback& on_body = {});

/// "/" + path for every resource, repeated round-robin to `count` entries.
std::vector<std::string> request_sequence(const SiteSnapshot& site, std::size_t count);

}  // namespace petcarbon::web

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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "petcarbon/web/http.hpp"

#include <httplib.h>
#include <openssl/pem.h>
#include <openssl/x509v3.h>

#include <atomic>
#include <fstream>
#include <iterator>
#include <limits>
#include <thread>
#include <unordered_map>

#include "petcarbon/common/error.hpp"
#include "petcarbon/common/openssl_util.hpp"

namespace petcarbon::web {

using ossl::check;

namespace {

using Bio = std::unique_ptr<BIO, ossl::Deleter<BIO_free>>;
using X509Store = std::unique_ptr<X509_STORE, ossl::Deleter<X509_STORE_free>>;

std::string bio_string(BIO* bio) {
  char* data = nullptr;
  const long len = BIO_get_mem_data(bio, &data);
  return std::string(data, static_cast<std::size_t>(len));
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::kTlsConfigError, p.string() + ": cannot read");
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

ossl::X509Ptr parse_cert(const std::string& pem) {
  Bio bio(BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size())));
  check(bio != nullptr, "BIO_new_mem_buf");
  return ossl::X509Ptr(PEM_read_bio_X509(bio.get(), nullptr, nullptr, nullptr));
}

ossl::PKey parse_key(const std::string& pem) {
  Bio bio(BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size())));
  check(bio != nullptr, "BIO_new_mem_buf");
  return ossl::PKey(PEM_read_bio_PrivateKey(bio.get(), nullptr, nullptr, nullptr));
}

bool pin_tls13(SSL_CTX* ctx) {
  return SSL_CTX_set_min_proto_version(ctx, TLS1_3_VERSION) == 1 &&
         SSL_CTX_set_max_proto_version(ctx, TLS1_3_VERSION) == 1;
}

// Delegates to httplib's pool; counts every accepted connection handed over.
class CountingQueue final : public httplib::TaskQueue {
 public:
  CountingQueue(std::size_t threads, std::atomic<std::size_t>& counter)
      : pool_(threads), counter_(counter) {}

  bool enqueue(std::function<void()> fn) override {
    counter_.fetch_add(1, std::memory_order_relaxed);
    return pool_.enqueue(std::move(fn));
  }
  void shutdown() override { pool_.shutdown(); }

 private:
  httplib::ThreadPool pool_;
  std::atomic<std::size_t>& counter_;
};

}  // namespace

std::string_view to_string(Mode m) { return m == Mode::kHttp ? "http" : "https"; }

Mode parse_mode(std::string_view s) {
  if (s == "http") return Mode::kHttp;
  if (s == "https") return Mode::kHttpsTls13;
  throw Error(ErrorCode::kInvalidArgument, "unknown mode '" + std::string(s) + "'");
}

TlsIdentity TlsIdentity::self_signed() {
  ossl::PKey key(EVP_PKEY_Q_keygen(nullptr, nullptr, "EC", "prime256v1"));
  check(key != nullptr, "EVP_PKEY_Q_keygen");
  ossl::X509Ptr cert(X509_new());
  check(cert != nullptr, "X509_new");
  check(X509_set_version(cert.get(), 2) == 1, "X509_set_version");
  ASN1_INTEGER_set(X509_get_serialNumber(cert.get()), 1);
  X509_gmtime_adj(X509_getm_notBefore(cert.get()), -3600);
  X509_gmtime_adj(X509_getm_notAfter(cert.get()), 7L * 24 * 3600);
  check(X509_set_pubkey(cert.get(), key.get()) == 1, "X509_set_pubkey");
  X509_NAME* name = X509_get_subject_name(cert.get());
  check(X509_NAME_add_entry_by_txt(name, "CN", MBSTRING_ASC,
                                   reinterpret_cast<const unsigned char*>("localhost"), -1, -1,
                                   0) == 1,
        "X509_NAME_add_entry_by_txt");
  check(X509_set_issuer_name(cert.get(), name) == 1, "X509_set_issuer_name");

  X509V3_CTX v3;
  X509V3_set_ctx_nodb(&v3);
  X509V3_set_ctx(&v3, cert.get(), cert.get(), nullptr, nullptr, 0);
  for (auto [nid, value] : {std::pair{NID_subject_alt_name, "DNS:localhost,IP:127.0.0.1"},
                            std::pair{NID_basic_constraints, "critical,CA:TRUE"},
                            std::pair{NID_key_usage, "critical,digitalSignature,keyCertSign"}}) {
    X509_EXTENSION* ext = X509V3_EXT_conf_nid(nullptr, &v3, nid, value);
    check(ext != nullptr, "X509V3_EXT_conf_nid");
    const int ok = X509_add_ext(cert.get(), ext, -1);
    X509_EXTENSION_free(ext);
    check(ok == 1, "X509_add_ext");
  }
  check(X509_sign(cert.get(), key.get(), EVP_sha256()) > 0, "X509_sign");

  TlsIdentity id;
  Bio cbio(BIO_new(BIO_s_mem()));
  check(cbio && PEM_write_bio_X509(cbio.get(), cert.get()) == 1, "PEM_write_bio_X509");
  id.cert_pem = bio_string(cbio.get());
  Bio kbio(BIO_new(BIO_s_mem()));
  check(kbio && PEM_write_bio_PrivateKey(kbio.get(), key.get(), nullptr, nullptr, 0, nullptr,
                                         nullptr) == 1,
        "PEM_write_bio_PrivateKey");
  id.key_pem = bio_string(kbio.get());
  return id;
}

// --- server -------------------------------------------------------------------------

struct StaticServer::Impl {
  Mode mode;
  std::string host;
  int port = 0;
  std::string cert_pem;
  std::unique_ptr<httplib::Server> server;
  std::thread thread;
  std::atomic<std::size_t> connections{0};
  struct Entry {
    std::string body;
    std::string type;
  };
  std::unordered_map<std::string, Entry> files;
};

StaticServer::StaticServer(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

StaticServer::~StaticServer() { stop(); }

std::unique_ptr<StaticServer> StaticServer::start(const SiteSnapshot& site,
                                                  const WebServerConfig& config) {
  auto impl = std::make_unique<Impl>();
  impl->mode = config.mode;
  impl->host = config.host;
  for (const auto& r : site.resources) {
    std::ifstream f(site.root / r.path, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIoError, (site.root / r.path).string() + ": cannot read");
    std::string body((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    impl->files["/" + r.path] = {std::move(body), content_type_for(r.path)};
  }
  if (impl->files.count("/index.html")) impl->files["/"] = impl->files["/index.html"];

  if (config.mode == Mode::kHttp) {
    impl->server = std::make_unique<httplib::Server>();
  } else {
    if (config.tls_cert.has_value() != config.tls_key.has_value()) {
      throw Error(ErrorCode::kTlsConfigError, "HTTPS needs both a certificate and a key");
    }
    TlsIdentity id = config.tls_cert ? TlsIdentity{read_text(*config.tls_cert),
                                                   read_text(*config.tls_key)}
                                     : TlsIdentity::self_signed();
    auto cert = parse_cert(id.cert_pem);
    auto key = parse_key(id.key_pem);
    if (!cert || !key) {
      ERR_clear_error();
      throw Error(ErrorCode::kTlsConfigError, "certificate or key is not valid PEM");
    }
    auto server = std::make_unique<httplib::SSLServer>([&](SSL_CTX& ctx) {
      SSL_CTX_set_options(&ctx, SSL_OP_NO_COMPRESSION);
      return pin_tls13(&ctx) && SSL_CTX_use_certificate(&ctx, cert.get()) == 1 &&
             SSL_CTX_use_PrivateKey(&ctx, key.get()) == 1 && SSL_CTX_check_private_key(&ctx) == 1;
    });
    if (!server->is_valid()) {
      ERR_clear_error();
      throw Error(ErrorCode::kTlsConfigError, "certificate and key do not form a TLS 1.3 identity");
    }
    impl->cert_pem = std::move(id.cert_pem);
    impl->server = std::move(server);
  }

  auto* raw = impl.get();
  const std::size_t threads = std::max<std::size_t>(1, config.threads);
  impl->server->new_task_queue = [raw, threads] {
    return new CountingQueue(threads, raw->connections);
  };
  impl->server->Get(".*", [raw](const httplib::Request& req, httplib::Response& res) {
    const auto it = raw->files.find(req.path);
    if (it == raw->files.end()) {
      res.status = 404;
      res.set_content("not found\n", "text/plain");
      return;
    }
    res.status = 200;
    res.set_content(it->second.body, it->second.type);
  });

  // SO_REUSEADDR only: httplib's default SO_REUSEPORT lets a second server share a busy port.
  impl->server->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  impl->server->set_keep_alive_max_count(std::numeric_limits<std::size_t>::max());

  if (config.port == 0) {
    impl->port = impl->server->bind_to_any_port(config.host);
    if (impl->port <= 0) {
      throw Error(ErrorCode::kBindFailure, "cannot bind a port on " + config.host);
    }
  } else {
    if (!impl->server->bind_to_port(config.host, config.port)) {
      throw Error(ErrorCode::kBindFailure,
                  config.host + ":" + std::to_string(config.port) + " is not available");
    }
    impl->port = config.port;
  }
  impl->thread = std::thread([raw] { raw->server->listen_after_bind(); });
  impl->server->wait_until_ready();
  return std::unique_ptr<StaticServer>(new StaticServer(std::move(impl)));
}

Mode StaticServer::mode() const { return impl_->mode; }
const std::string& StaticServer::host() const { return impl_->host; }
int StaticServer::port() const { return impl_->port; }
const std::string& StaticServer::cert_pem() const { return impl_->cert_pem; }
std::size_t StaticServer::connections() const { return impl_->connections.load(); }

void StaticServer::stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  impl_->server->stop();
  impl_->thread.join();
}

// --- client -------------------------------------------------------------------------

std::size_t FetchStats::count(int status) const {
  const auto it = statuses.find(status);
  return it == statuses.end() ? 0 : it->second;
}

struct Fetcher::Impl {
  ClientTarget target;
  std::unique_ptr<httplib::ClientImpl> client;
};

Fetcher::Fetcher(ClientTarget target, ConnectionPolicy policy) : impl_(std::make_unique<Impl>()) {
  impl_->target = std::move(target);
  const auto& t = impl_->target;
  if (t.mode == Mode::kHttp) {
    impl_->client = std::make_unique<httplib::ClientImpl>(t.host, t.port);
  } else {
    auto cli = std::make_unique<httplib::SSLClient>(t.host, t.port);
    if (!cli->is_valid() || !pin_tls13(cli->ssl_context())) {
      ERR_clear_error();
      throw Error(ErrorCode::kTlsConfigError, "cannot create a TLS 1.3 client context");
    }
    if (t.pinned_cert_pem.empty()) {
      throw Error(ErrorCode::kTlsConfigError, "HTTPS client needs the pinned server certificate");
    }
    cli->load_ca_cert_store(t.pinned_cert_pem.data(), t.pinned_cert_pem.size());
    cli->enable_server_certificate_verification(true);
    impl_->client = std::move(cli);
  }
  impl_->client->set_keep_alive(policy == ConnectionPolicy::kKeepAlive);
  impl_->client->set_connection_timeout(5, 0);
  impl_->client->set_read_timeout(30, 0);
}

Fetcher::~Fetcher() = default;

int Fetcher::get(const std::string& path, FetchStats& stats, const BodyCallback& on_body) {
  auto res = impl_->client->Get(path);
  if (!res) {
    const auto err = res.error();
    const std::string what = std::string(to_string(impl_->target.mode)) + "://" +
                             impl_->target.host + ":" + std::to_string(impl_->target.port) +
                             path + ": " + httplib::to_string(err);
    switch (err) {
      case httplib::Error::SSLConnection:
      case httplib::Error::SSLLoadingCerts:
      case httplib::Error::SSLServerVerification:
        throw Error(ErrorCode::kTlsHandshakeFailure, what);
      default:
        throw Error(ErrorCode::kConnectFailure, what);
    }
  }
  ++stats.requests;
  stats.bytes += res->body.size();
  ++stats.statuses[res->status];
  if (on_body) on_body(path, res->status, res->body);
  return res->status;
}

FetchStats fetch_batch(const std::vector<std::string>& paths, const ClientTarget& target,
                       ConnectionPolicy policy, const BodyCallback& on_body) {
  if (paths.empty()) throw Error(ErrorCode::kInvalidArgument, "fetch_batch needs at least one URL");
  Fetcher fetcher(target, policy);
  FetchStats stats;
  for (const auto& p : paths) fetcher.get(p, stats, on_body);
  return stats;
}

std::vector<std::string> request_sequence(const SiteSnapshot& site, std::size_t count) {
  if (site.resources.empty()) throw Error(ErrorCode::kInvalidArgument, "empty snapshot");
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back("/" + site.resources[i % site.resources.size()].path);
  }
  return out;
}

}  // namespace petcarbon::web

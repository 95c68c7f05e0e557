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
#include <gtest/gtest.h>
#include <httplib.h>

#include <fstream>
#include <iterator>
#include <map>

#include "petcarbon/common/symmetric.hpp"
#include "petcarbon/harness/runner.hpp"
#include "petcarbon/web/http.hpp"
#include "petcarbon/web/site.hpp"
#include "petcarbon/web/workloads.hpp"
#include "test_support.hpp"

namespace petcarbon::web {
namespace {

using testing::code_of;
using testing::TempDir;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

// Five hand-written resources with known sizes.
struct SmallSite {
  TempDir dir{"site"};
  SiteSnapshot site;
  SmallSite() {
    dir.write("index.html", "<html><body>hello</body></html>\n");
    dir.write("css/site.css", std::string(1500, 'c'));
    dir.write("js/app.js", std::string(2048, 'j'));
    std::string img(40000, '\0');
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = static_cast<char>(i * 7919 % 251);
    dir.write("img/logo.png", img);
    dir.write("about.html", "<p>about</p>");
    dir.write(kManifestName, "index.html\ncss/site.css\njs/app.js\nimg/logo.png\nabout.html\n");
    site = load_snapshot(dir.path());
  }
};

ClientTarget target_of(const StaticServer& s) {
  return {s.mode(), s.host(), s.port(), s.cert_pem()};
}

TEST(Site, ManifestLoadsSizes) {
  SmallSite s;
  ASSERT_EQ(s.site.resources.size(), 5u);
  EXPECT_EQ(s.site.resources[1].path, "css/site.css");
  EXPECT_EQ(s.site.resources[1].bytes, 1500u);
  EXPECT_EQ(s.site.total_bytes(), 32u + 1500 + 2048 + 40000 + 12);
}

TEST(Site, ManifestErrors) {
  TempDir d("site");
  EXPECT_EQ(code_of([&] { load_snapshot(d.path()); }), ErrorCode::kIoError);
  d.write(kManifestName, "# nothing\n\n");
  EXPECT_EQ(code_of([&] { load_snapshot(d.path()); }), ErrorCode::kInvalidArgument);
  d.write(kManifestName, "missing.html\n");
  EXPECT_EQ(code_of([&] { load_snapshot(d.path()); }), ErrorCode::kIoError);
  d.write(kManifestName, "../etc/passwd\n");
  EXPECT_EQ(code_of([&] { load_snapshot(d.path()); }), ErrorCode::kInvalidArgument);
  d.write(kManifestName, "/etc/passwd\n");
  EXPECT_EQ(code_of([&] { load_snapshot(d.path()); }), ErrorCode::kInvalidArgument);
}

TEST(Site, ContentTypes) {
  EXPECT_EQ(content_type_for("a/b.html"), "text/html; charset=utf-8");
  EXPECT_EQ(content_type_for("x.css"), "text/css");
  EXPECT_EQ(content_type_for("x.js"), "application/javascript");
  EXPECT_EQ(content_type_for("x.png"), "image/png");
  EXPECT_EQ(content_type_for("x.bin"), "application/octet-stream");
}

TEST(Site, SyntheticSiteShape) {
  TempDir d("site");
  const auto site = generate_synthetic_site(d.path(), 11, 50);
  ASSERT_EQ(site.resources.size(), 50u);
  std::map<std::string, int> kinds;
  std::size_t lo = SIZE_MAX, hi = 0;
  for (const auto& r : site.resources) {
    kinds[std::filesystem::path(r.path).extension().string()]++;
    if (r.path == "index.html") continue;
    lo = std::min(lo, r.bytes);
    hi = std::max(hi, r.bytes);
    EXPECT_GE(r.bytes, 1024u) << r.path;
    EXPECT_LE(r.bytes, 500u * 1024) << r.path;
  }
  EXPECT_EQ(lo, 1024u);
  EXPECT_EQ(hi, 500u * 1024);
  for (const char* ext : {".html", ".css", ".js", ".png", ".jpg"}) EXPECT_GT(kinds[ext], 0) << ext;
}

TEST(Site, SyntheticSiteIsDeterministic) {
  TempDir a("site"), b("site");
  const auto sa = generate_synthetic_site(a.path(), 5, 20);
  const auto sb = generate_synthetic_site(b.path(), 5, 20);
  ASSERT_EQ(sa.resources.size(), sb.resources.size());
  for (std::size_t i = 0; i < sa.resources.size(); ++i) {
    EXPECT_EQ(sa.resources[i].path, sb.resources[i].path);
    EXPECT_EQ(slurp(a.path() / sa.resources[i].path), slurp(b.path() / sb.resources[i].path));
  }
}

TEST(Site, BundledSiteIsCachedAndValidated) {
  TempDir cache("cache");
  const auto first = bundled_site(cache.path());
  EXPECT_EQ(first.resources.size(), kBundledSiteFiles);
  const auto again = bundled_site(cache.path());
  EXPECT_EQ(again.root, first.root);
  // A damaged cache is regenerated.
  std::filesystem::remove(first.root / first.resources[3].path);
  const auto repaired = bundled_site(cache.path());
  EXPECT_EQ(repaired.total_bytes(), first.total_bytes());
}

TEST(StaticServerTest, ServesExactBytesWithContentLength) {
  SmallSite s;
  auto server = StaticServer::start(s.site, {});
  httplib::Client cli(server->host(), server->port());
  for (const auto& r : s.site.resources) {
    auto res = cli.Get("/" + r.path);
    ASSERT_TRUE(res) << r.path;
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->body, slurp(s.dir.path() / r.path));
    EXPECT_EQ(res->get_header_value("Content-Length"), std::to_string(r.bytes));
    EXPECT_EQ(res->get_header_value("Content-Type"), content_type_for(r.path));
  }
}

TEST(StaticServerTest, MissingPathIs404) {
  SmallSite s;
  auto server = StaticServer::start(s.site, {});
  FetchStats st;
  Fetcher f(target_of(*server), ConnectionPolicy::kFreshPerRequest);
  EXPECT_EQ(f.get("/nope.html", st), 404);
  EXPECT_EQ(st.count(404), 1u);
}

TEST(StaticServerTest, HttpsBodiesEqualHttpBodies) {
  SmallSite s;
  auto http = StaticServer::start(s.site, {});
  WebServerConfig tls;
  tls.mode = Mode::kHttpsTls13;
  auto https = StaticServer::start(s.site, tls);
  const auto paths = request_sequence(s.site, s.site.resources.size());
  std::map<std::string, std::string> a, b;
  fetch_batch(paths, target_of(*http), ConnectionPolicy::kFreshPerRequest,
              [&](const std::string& p, int, std::string_view body) { a[p] = body; });
  fetch_batch(paths, target_of(*https), ConnectionPolicy::kFreshPerRequest,
              [&](const std::string& p, int, std::string_view body) { b[p] = body; });
  EXPECT_EQ(a.size(), paths.size());
  EXPECT_EQ(a, b);
}

TEST(StaticServerTest, TlsIsPinnedTo13) {
  SmallSite s;
  WebServerConfig tls;
  tls.mode = Mode::kHttpsTls13;
  auto server = StaticServer::start(s.site, tls);
  httplib::SSLClient old(server->host(), server->port());
  SSL_CTX_set_max_proto_version(old.ssl_context(), TLS1_2_VERSION);
  old.enable_server_certificate_verification(false);
  EXPECT_FALSE(old.Get("/index.html"));

  httplib::SSLClient modern(server->host(), server->port());
  modern.load_ca_cert_store(server->cert_pem().data(), server->cert_pem().size());
  modern.enable_server_certificate_verification(true);
  auto res = modern.Get("/index.html");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
}

TEST(StaticServerTest, UnpinnedCertificateIsHandshakeFailure) {
  SmallSite s;
  WebServerConfig tls;
  tls.mode = Mode::kHttpsTls13;
  auto server = StaticServer::start(s.site, tls);
  auto t = target_of(*server);
  t.pinned_cert_pem = TlsIdentity::self_signed().cert_pem;
  EXPECT_EQ(code_of([&] { fetch_batch({"/index.html"}, t); }), ErrorCode::kTlsHandshakeFailure);
}

TEST(StaticServerTest, PortInUseIsBindFailure) {
  SmallSite s;
  auto first = StaticServer::start(s.site, {});
  WebServerConfig cfg;
  cfg.port = first->port();
  EXPECT_EQ(code_of([&] { StaticServer::start(s.site, cfg); }), ErrorCode::kBindFailure);
}

TEST(StaticServerTest, TlsConfigErrors) {
  SmallSite s;
  TempDir d("tls");
  d.write("cert.pem", "not a certificate");
  d.write("key.pem", "not a key");
  WebServerConfig cfg;
  cfg.mode = Mode::kHttpsTls13;
  cfg.tls_cert = d.path() / "cert.pem";
  EXPECT_EQ(code_of([&] { StaticServer::start(s.site, cfg); }), ErrorCode::kTlsConfigError);
  cfg.tls_key = d.path() / "key.pem";
  EXPECT_EQ(code_of([&] { StaticServer::start(s.site, cfg); }), ErrorCode::kTlsConfigError);
  // Key from another identity.
  const auto a = TlsIdentity::self_signed(), b = TlsIdentity::self_signed();
  d.write("cert.pem", a.cert_pem);
  d.write("key.pem", b.key_pem);
  EXPECT_EQ(code_of([&] { StaticServer::start(s.site, cfg); }), ErrorCode::kTlsConfigError);
  d.write("key.pem", a.key_pem);
  auto ok = StaticServer::start(s.site, cfg);
  EXPECT_EQ(ok->cert_pem(), a.cert_pem);
}

TEST(StaticServerTest, NoListenerIsConnectFailure) {
  SmallSite s;
  auto server = StaticServer::start(s.site, {});
  const auto t = target_of(*server);
  server->stop();
  EXPECT_EQ(code_of([&] { fetch_batch({"/index.html"}, t); }), ErrorCode::kConnectFailure);
}

TEST(FetchBatch, EmptyListIsPreconditionError) {
  EXPECT_EQ(code_of([] { fetch_batch({}, ClientTarget{}); }), ErrorCode::kInvalidArgument);
}

TEST(FetchBatch, ThousandRequestsRoundRobin) {
  SmallSite s;
  for (auto mode : {Mode::kHttp, Mode::kHttpsTls13}) {
    WebServerConfig cfg;
    cfg.mode = mode;
    auto server = StaticServer::start(s.site, cfg);
    const auto stats = fetch_batch(request_sequence(s.site, 1000), target_of(*server));
    EXPECT_EQ(stats.requests, 1000u);
    EXPECT_EQ(stats.count(200), 1000u);
    // 1000 requests over 5 resources: each fetched 200 times.
    std::size_t expected = 0;
    for (const auto& r : s.site.resources) expected += r.bytes * 200;
    EXPECT_EQ(stats.bytes, expected);
    EXPECT_EQ(server->connections(), 1000u) << to_string(mode);
  }
}

TEST(FetchBatch, KeepAliveReusesOneConnection) {
  SmallSite s;
  for (auto mode : {Mode::kHttp, Mode::kHttpsTls13}) {
    WebServerConfig cfg;
    cfg.mode = mode;
    auto server = StaticServer::start(s.site, cfg);
    const auto stats =
        fetch_batch(request_sequence(s.site, 50), target_of(*server), ConnectionPolicy::kKeepAlive);
    EXPECT_EQ(stats.count(200), 50u);
    EXPECT_EQ(server->connections(), 1u) << to_string(mode);
  }
}

TEST(WebWorkloads, PairRunsWithFreshHandshakes) {
  SmallSite s;
  auto pair = web_suite_workloads(s.site);
  EXPECT_EQ(pair.private_variant->id(), "web-fresh");
  auto* priv = dynamic_cast<WebWorkload*>(pair.private_variant.get());
  auto* base = dynamic_cast<WebWorkload*>(pair.baseline.get());
  ASSERT_TRUE(priv && base);

  meter::MeterConfig cfg;
  auto m = meter::Meter::open(cfg);
  harness::RunOptions opt;
  opt.iterations = 100;
  opt.warmup = 5;
  const auto r = harness::run_pair(*priv, *base, opt, m,
                                   carbon::IntensityTable::builtin().lookup("NL"));
  EXPECT_EQ(priv->totals().requests, 105u);
  EXPECT_EQ(base->totals().requests, 105u);
  EXPECT_EQ(priv->totals().bytes, base->totals().bytes);
  EXPECT_EQ(priv->totals().count(200), 105u);

  // Constant synthetic power: energy ratio tracks the runtime ratio.
  ASSERT_TRUE(r.overhead_ratio);
  const double runtime_ratio = r.private_stats.mean_runtime_s / r.baseline_stats.mean_runtime_s;
  EXPECT_NEAR(*r.overhead_ratio, runtime_ratio, 0.1 * runtime_ratio);
  EXPECT_GT(runtime_ratio, 1.0);
}

TEST(WebWorkloads, ServerCountsOneConnectionPerRequest) {
  SmallSite s;
  WebWorkload w("web-fresh", Mode::kHttpsTls13, s.site, {});
  w.setup();
  for (int i = 0; i < 12; ++i) w.run_once();
  EXPECT_EQ(w.server_connections(), 12u);
  w.teardown();

  WebWorkload k("web-keepalive", Mode::kHttpsTls13, s.site,
                {1, ConnectionPolicy::kKeepAlive});
  k.setup();
  for (int i = 0; i < 12; ++i) k.run_once();
  EXPECT_EQ(k.server_connections(), 1u);
  k.teardown();
}

}  // namespace
}  // namespace petcarbon::web

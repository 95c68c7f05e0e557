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

#include "petcarbon/web/site.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "petcarbon/common/error.hpp"
#include "petcarbon/common/splitmix.hpp"

namespace petcarbon::web {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMinBytes = 1024;
constexpr std::size_t kMaxBytes = 500 * 1024;

bool safe_relative(const std::string& p) {
  if (p.empty() || p.front() == '/' || p.find('\\') != std::string::npos) return false;
  for (const auto& part : fs::path(p)) {
    if (part == ".." || part == ".") return false;
  }
  return true;
}

std::string filler_text(SplitMix64& rng, std::size_t n) {
  static constexpr const char* kWords[] = {"lorem", "ipsum", "dolor", "sit",    "amet",
                                           "news",  "comic", "story", "today",  "world",
                                           "page",  "link",  "image", "reader", "column"};
  std::string s;
  while (s.size() < n) {
    s += kWords[rng.below(std::size(kWords))];
    s += rng.below(9) == 0 ? ".\n" : " ";
  }
  s.resize(n);
  return s;
}

// Markup-shaped content padded to exactly n bytes.
std::string text_asset(SplitMix64& rng, const std::string& kind, std::size_t n) {
  std::string head;
  if (kind == "html") head = "<!doctype html>\n<html><head><meta charset=\"utf-8\"></head><body><p>\n";
  if (kind == "css") head = "/* generated */\nbody { margin: 0; }\n.c { color: #333; }\n/*\n";
  if (kind == "js") head = "'use strict';\n// generated\nfunction noop() {}\n/*\n";
  const std::string tail = kind == "html" ? "\n</p></body></html>\n" : "\n*/\n";
  std::string body = head.size() + tail.size() < n ? filler_text(rng, n - head.size() - tail.size())
                                                   : std::string();
  std::string out = head + body + tail;
  out.resize(n, ' ');
  return out;
}

// Images are incompressible: a format signature followed by random bytes.
std::string binary_asset(SplitMix64& rng, const std::string& kind, std::size_t n) {
  std::string out = kind == "png" ? std::string("\x89PNG\r\n\x1a\n", 8)
                                  : std::string("\xff\xd8\xff\xe0", 4);
  while (out.size() < n) {
    const auto w = rng.next();
    for (int i = 0; i < 8 && out.size() < n; ++i) out.push_back(static_cast<char>(w >> (8 * i)));
  }
  out.resize(n);
  return out;
}

void write_file(const fs::path& p, const std::string& data) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f << data;
  if (!f) throw Error(ErrorCode::kIoError, p.string() + ": write failed");
}

}  // namespace

std::size_t SiteSnapshot::total_bytes() const {
  std::size_t t = 0;
  for (const auto& r : resources) t += r.bytes;
  return t;
}

std::string content_type_for(const std::string& path) {
  const auto ext = fs::path(path).extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".css") return "text/css";
  if (ext == ".js") return "application/javascript";
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".txt") return "text/plain";
  return "application/octet-stream";
}

SiteSnapshot load_snapshot(const fs::path& root) {
  std::ifstream mf(root / kManifestName);
  if (!mf) throw Error(ErrorCode::kIoError, (root / kManifestName).string() + ": cannot open");
  SiteSnapshot site;
  site.root = root;
  std::string line;
  while (std::getline(mf, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!safe_relative(line)) {
      throw Error(ErrorCode::kInvalidArgument, "manifest path escapes the site root: " + line);
    }
    std::error_code ec;
    const auto p = root / line;
    if (!fs::is_regular_file(p, ec)) throw Error(ErrorCode::kIoError, p.string() + ": not readable");
    const auto size = fs::file_size(p, ec);
    if (ec) throw Error(ErrorCode::kIoError, p.string() + ": " + ec.message());
    if (::access(p.c_str(), R_OK) != 0) throw Error(ErrorCode::kIoError, p.string() + ": not readable");
    site.resources.push_back({line, static_cast<std::size_t>(size)});
  }
  if (site.resources.empty()) {
    throw Error(ErrorCode::kInvalidArgument, (root / kManifestName).string() + ": no resources");
  }
  return site;
}

SiteSnapshot generate_synthetic_site(const fs::path& root, std::uint64_t seed,
                                     std::size_t file_count) {
  if (file_count < 2) throw Error(ErrorCode::kInvalidArgument, "a site needs at least 2 files");
  SplitMix64 rng(seed);
  struct Kind {
    const char* dir;
    const char* ext;
    bool binary;
  };
  static constexpr Kind kKinds[] = {{"pages", "html", false}, {"css", "css", false},
                                    {"js", "js", false},      {"img", "png", true},
                                    {"img", "jpg", true}};
  const double log_min = std::log(static_cast<double>(kMinBytes));
  const double log_max = std::log(static_cast<double>(kMaxBytes));

  std::vector<std::string> paths;
  for (std::size_t i = 1; i < file_count; ++i) {
    const auto& k = kKinds[i % std::size(kKinds)];
    std::size_t n;
    if (i == 1) {
      n = kMinBytes;
    } else if (i == file_count - 1) {
      n = kMaxBytes;
    } else {
      n = static_cast<std::size_t>(std::exp(log_min + rng.unit() * (log_max - log_min)));
    }
    char name[64];
    std::snprintf(name, sizeof name, "%s/asset_%03zu.%s", k.dir, i, k.ext);
    write_file(root / name, k.binary ? binary_asset(rng, k.ext, n) : text_asset(rng, k.ext, n));
    paths.push_back(name);
  }
  std::ostringstream index;
  index << "<!doctype html>\n<html><head><title>petcarbon synthetic site</title>\n";
  for (const auto& p : paths) {
    if (p.ends_with(".css")) index << "<link rel=\"stylesheet\" href=\"/" << p << "\">\n";
    if (p.ends_with(".js")) index << "<script src=\"/" << p << "\"></script>\n";
  }
  index << "</head><body>\n";
  for (const auto& p : paths) {
    if (p.ends_with(".png") || p.ends_with(".jpg")) index << "<img src=\"/" << p << "\">\n";
    if (p.ends_with(".html")) index << "<a href=\"/" << p << "\">" << p << "</a>\n";
  }
  index << "</body></html>\n";
  write_file(root / "index.html", index.str());

  std::ostringstream manifest;
  manifest << "index.html\n";
  for (const auto& p : paths) manifest << p << "\n";
  write_file(root / kManifestName, manifest.str());
  return load_snapshot(root);
}

SiteSnapshot bundled_site(const fs::path& cache_root) {
  const fs::path base = cache_root.empty() ? fs::temp_directory_path() : cache_root;
  const std::string name = "petcarbon-site-" + std::to_string(kBundledSiteSeed);
  const auto dir = base / name;
  // Written last, so its presence marks a complete copy.
  const auto stamp_of = [](const SiteSnapshot& s) {
    return std::to_string(s.resources.size()) + " " + std::to_string(s.total_bytes()) + "\n";
  };
  const auto valid = [&](const fs::path& d) {
    try {
      std::ifstream f(d / "STAMP");
      std::string stamp((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
      const auto site = load_snapshot(d);
      return !stamp.empty() && stamp == stamp_of(site) &&
             site.resources.size() == kBundledSiteFiles;
    } catch (const Error&) {
      return false;
    }
  };
  std::error_code ec;
  if (valid(dir)) return load_snapshot(dir);

  const auto scratch = base / (name + ".tmp." + std::to_string(::getpid()));
  fs::remove_all(scratch, ec);
  const auto site = generate_synthetic_site(scratch, kBundledSiteSeed, kBundledSiteFiles);
  write_file(scratch / "STAMP", stamp_of(site));
  if (fs::exists(dir, ec) && !valid(dir)) fs::remove_all(dir, ec);
  fs::rename(scratch, dir, ec);
  if (ec) fs::remove_all(scratch, ec);  // lost a race to another process
  if (!valid(dir)) throw Error(ErrorCode::kIoError, dir.string() + ": could not materialize site");
  return load_snapshot(dir);
}

}  // namespace petcarbon::web

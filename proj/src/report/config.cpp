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

#include "petcarbon/report/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <type_traits>

#include "petcarbon/common/error.hpp"

namespace petcarbon::report {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorCode::kUsageError, msg); }

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

void reject_unknown(const Json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      usage("unknown key '" + k + "' in " + where);
    }
  }
}

// nlohmann converts -3 to a huge size_t without complaint.
template <typename T>
T convert(const Json& v, const char* key) {
  if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!v.is_number_unsigned()) usage(std::string("'") + key + "' must be a non-negative integer");
  } else if constexpr (std::is_same_v<T, std::vector<std::size_t>>) {
    if (!v.is_array()) usage(std::string("'") + key + "' must be an array");
    for (const auto& e : v) convert<std::size_t>(e, key);
  }
  return v.get<T>();
}

template <typename T>
void read(const Json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = convert<T>(obj.at(key), key);
}

template <typename T>
void read(const Json& obj, const char* key, std::optional<T>& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (v.is_null()) {
    out.reset();
  } else {
    out = convert<T>(v, key);
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) usage(msg);
}

bool all_positive(const std::vector<std::size_t>& v) {
  return !v.empty() && std::all_of(v.begin(), v.end(), [](std::size_t x) { return x > 0; });
}

}  // namespace

std::size_t default_iterations(const RunConfig& c, std::size_t heml_batch) {
  if (c.iterations) return *c.iterations;
  if (c.suite == "web" || c.suite == "edb") return 1000;
  if (c.suite == "heml") {
    const std::size_t b = std::max<std::size_t>(1, heml_batch);
    return std::max<std::size_t>(5, (c.heml.samples + b - 1) / b);
  }
  return 100;
}

void validate(const RunConfig& c) {
  require(std::find(std::begin(kSuites), std::end(kSuites), c.suite) != std::end(kSuites),
          "unknown suite '" + c.suite + "' (expected email, web, heml, edb or external)");
  require(!c.iterations || *c.iterations >= 1, "iterations must be >= 1");
  require(!c.country.empty(), "country must not be empty");
  require(c.meter.backend == "simulated" || c.meter.backend == "powercap",
          "meter must be simulated or powercap");
  require(c.meter.interval_ms >= 1, "meter interval must be >= 1 ms");
  require(c.meter.ram_gb >= 0, "ram_gb must be >= 0");
  if (c.suite == "email") {
    static const std::set<std::string> ciphers{"rsa", "ecc", "elgamal", "all"};
    static const std::set<std::string> ops{"encrypt", "sign", "both"};
    require(ciphers.count(c.email.cipher) > 0,
            "unknown cipher '" + c.email.cipher + "' (expected rsa, ecc, elgamal or all)");
    require(ops.count(c.email.op) > 0,
            "unknown op '" + c.email.op + "' (expected encrypt, sign or both)");
  } else if (c.suite == "heml") {
    require(all_positive(c.heml.features), "features must be a non-empty list of positive counts");
    require(c.heml.samples >= 1, "samples must be >= 1");
    require(c.heml.scale_bits >= 4 && c.heml.scale_bits <= 24, "scale-bits must be in [4, 24]");
    require(all_positive(c.heml.batch), "batch must be a non-empty list of positive sizes");
  } else if (c.suite == "edb") {
    require(all_positive(c.edb.db_sizes), "db-sizes must be a non-empty list of positive sizes");
  } else if (c.suite == "external") {
    require(!c.external.cmd.empty(), "external suite needs --cmd");
  }
}

std::string config_to_json(const RunConfig& c) {
  Json j;
  j["suite"] = c.suite;
  j["iterations"] = opt(c.iterations);
  j["warmup"] = c.warmup;
  j["country"] = c.country;
  j["year"] = opt(c.year);
  j["intensity_file"] = opt(c.intensity_file);
  j["meter"] = {{"backend", c.meter.backend},
                {"interval_ms", c.meter.interval_ms},
                {"ram_gb", c.meter.ram_gb},
                {"powercap_root", c.meter.powercap_root}};
  j["out"] = opt(c.out);
  j["csv"] = opt(c.csv);
  j["figures"] = opt(c.figures);
  j["seed"] = c.seed;
  Json p = Json::object();
  if (c.suite == "email") {
    p = {{"cipher", c.email.cipher}, {"op", c.email.op}, {"corpus", opt(c.email.corpus)}};
  } else if (c.suite == "web") {
    p = {{"site", opt(c.web.site)}, {"keep_alive", c.web.keep_alive}};
  } else if (c.suite == "heml") {
    p = {{"features", c.heml.features},
         {"samples", c.heml.samples},
         {"scale_bits", c.heml.scale_bits},
         {"batch", c.heml.batch},
         {"model_out", opt(c.heml.model_out)}};
  } else if (c.suite == "edb") {
    p = {{"corpus", opt(c.edb.corpus)}, {"db_sizes", c.edb.db_sizes}};
  } else if (c.suite == "external") {
    p = {{"cmd", c.external.cmd}, {"baseline_cmd", c.external.baseline_cmd}};
  }
  j["params"] = p;
  return j.dump(2);
}

RunConfig config_from_json(std::string_view text) {
  RunConfig c;
  try {
    const auto j = Json::parse(text);
    if (!j.is_object()) usage("config must be a JSON object");
    reject_unknown(j,
                   {"suite", "iterations", "warmup", "country", "year", "intensity_file", "meter",
                    "out", "csv", "figures", "seed", "params"},
                   "config");
    read(j, "suite", c.suite);
    read(j, "iterations", c.iterations);
    read(j, "warmup", c.warmup);
    read(j, "country", c.country);
    read(j, "year", c.year);
    read(j, "intensity_file", c.intensity_file);
    read(j, "out", c.out);
    read(j, "csv", c.csv);
    read(j, "figures", c.figures);
    read(j, "seed", c.seed);
    if (j.contains("meter")) {
      const auto& m = j.at("meter");
      reject_unknown(m, {"backend", "interval_ms", "ram_gb", "powercap_root"}, "meter");
      read(m, "backend", c.meter.backend);
      read(m, "interval_ms", c.meter.interval_ms);
      read(m, "ram_gb", c.meter.ram_gb);
      read(m, "powercap_root", c.meter.powercap_root);
    }
    if (j.contains("params")) {
      const auto& p = j.at("params");
      if (c.suite == "email") {
        reject_unknown(p, {"cipher", "op", "corpus"}, "email params");
        read(p, "cipher", c.email.cipher);
        read(p, "op", c.email.op);
        read(p, "corpus", c.email.corpus);
      } else if (c.suite == "web") {
        reject_unknown(p, {"site", "keep_alive"}, "web params");
        read(p, "site", c.web.site);
        read(p, "keep_alive", c.web.keep_alive);
      } else if (c.suite == "heml") {
        reject_unknown(p, {"features", "samples", "scale_bits", "batch", "model_out"},
                       "heml params");
        read(p, "features", c.heml.features);
        read(p, "samples", c.heml.samples);
        read(p, "scale_bits", c.heml.scale_bits);
        read(p, "batch", c.heml.batch);
        read(p, "model_out", c.heml.model_out);
      } else if (c.suite == "edb") {
        reject_unknown(p, {"corpus", "db_sizes"}, "edb params");
        read(p, "corpus", c.edb.corpus);
        read(p, "db_sizes", c.edb.db_sizes);
      } else if (c.suite == "external") {
        reject_unknown(p, {"cmd", "baseline_cmd"}, "external params");
        read(p, "cmd", c.external.cmd);
        read(p, "baseline_cmd", c.external.baseline_cmd);
      } else if (!p.empty()) {
        usage("params given for unknown suite '" + c.suite + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    usage(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kIoError, "cannot read config " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace petcarbon::report

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

#include "petcarbon/report/report.hpp"

#include <sys/utsname.h>

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "petcarbon/common/error.hpp"

namespace petcarbon::report {

namespace {

using Json = nlohmann::ordered_json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json stats_json(const harness::MeasurementStats& s, double emissions_g) {
  return {{"n_runs", s.n_runs},         {"mean_kwh", s.mean_kwh},
          {"std_kwh", s.std_kwh},       {"min_kwh", s.min_kwh},
          {"max_kwh", s.max_kwh},       {"mean_runtime_s", s.mean_runtime_s},
          {"mean_emissions_g", emissions_g}};
}

harness::MeasurementStats stats_from(const Json& j, double& emissions_g) {
  harness::MeasurementStats s;
  s.n_runs = j.at("n_runs").get<std::size_t>();
  s.mean_kwh = j.at("mean_kwh").get<double>();
  s.std_kwh = j.at("std_kwh").get<double>();
  s.min_kwh = j.at("min_kwh").get<double>();
  s.max_kwh = j.at("max_kwh").get<double>();
  s.mean_runtime_s = j.at("mean_runtime_s").get<double>();
  emissions_g = j.at("mean_emissions_g").get<double>();
  return s;
}

Json runs_json(const std::vector<harness::RunRecord>& runs,
               const carbon::CarbonIntensity& intensity) {
  Json out = Json::array();
  for (const auto& r : runs) {
    Json row;
    row["variant"] = std::string(harness::to_string(r.variant));
    row["run"] = r.run_index;
    row["sequence"] = r.sequence;
    row["energy_kwh"] = r.breakdown.total_kwh;
    row["emissions_g"] = carbon::emissions(r.breakdown.total_kwh, intensity);
    row["runtime_s"] = r.runtime_s;
    row["duration_s"] = r.breakdown.duration_s;
    row["sample_count"] = r.breakdown.sample_count;
    row["per_domain_kwh"] = Json(r.breakdown.per_domain_kwh);
    row["per_domain_uj"] = Json(r.breakdown.per_domain_uj);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<harness::RunRecord> runs_from(const Json& j) {
  std::vector<harness::RunRecord> out;
  for (const auto& row : j) {
    harness::RunRecord r;
    r.variant = harness::parse_variant(row.at("variant").get<std::string>());
    r.run_index = row.at("run").get<std::size_t>();
    r.sequence = row.at("sequence").get<std::size_t>();
    r.breakdown.total_kwh = row.at("energy_kwh").get<double>();
    r.runtime_s = row.at("runtime_s").get<double>();
    r.breakdown.duration_s = row.at("duration_s").get<double>();
    r.breakdown.sample_count = row.at("sample_count").get<std::size_t>();
    r.breakdown.per_domain_kwh = row.at("per_domain_kwh").get<std::map<std::string, double>>();
    r.breakdown.per_domain_uj =
        row.at("per_domain_uj").get<std::map<std::string, std::uint64_t>>();
    out.push_back(std::move(r));
  }
  return out;
}

void put_intensity(Json& j, const carbon::CarbonIntensity& c) {
  j["country"] = c.country;
  j["year"] = c.year;
  j["g_per_kwh"] = c.g_per_kwh;
}

carbon::CarbonIntensity intensity_from(const Json& j) {
  return {j.at("country").get<std::string>(), j.at("g_per_kwh").get<double>(),
          j.at("year").get<int>()};
}

Json pair_json(const harness::PairResult& p) {
  Json j;
  j["workload"] = p.workload;
  Json tax = Json::array();
  for (auto o : p.taxonomy) tax.push_back(std::string(harness::to_string(o)));
  j["taxonomy"] = tax;
  put_intensity(j, p.intensity);
  j["private"] = stats_json(p.private_stats, p.private_emissions_g);
  j["baseline"] = stats_json(p.baseline_stats, p.baseline_emissions_g);
  j["overhead_ratio"] = p.overhead_ratio ? Json(*p.overhead_ratio) : Json(nullptr);
  j["runs"] = runs_json(p.runs, p.intensity);
  return j;
}

harness::PairResult pair_from(const Json& j) {
  harness::PairResult p;
  p.workload = j.at("workload").get<std::string>();
  for (const auto& t : j.at("taxonomy")) p.taxonomy.insert(harness::parse_overhead(t.get<std::string>()));
  p.intensity = intensity_from(j);
  p.private_stats = stats_from(j.at("private"), p.private_emissions_g);
  p.baseline_stats = stats_from(j.at("baseline"), p.baseline_emissions_g);
  if (!j.at("overhead_ratio").is_null()) p.overhead_ratio = j.at("overhead_ratio").get<double>();
  p.runs = runs_from(j.at("runs"));
  return p;
}

std::string read_line_value(const std::string& path, const std::string& key) {
  std::ifstream f(path);
  std::string line;
  while (std::getline(f, line)) {
    if (line.compare(0, key.size(), key) != 0) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    auto v = line.substr(colon + 1);
    const auto b = v.find_first_not_of(" \t");
    return b == std::string::npos ? std::string() : v.substr(b);
  }
  return {};
}

}  // namespace

HostDescriptor detect_host(std::string_view meter_backend) {
  HostDescriptor h;
  h.meter_backend = std::string(meter_backend);
  h.cpu_model = read_line_value("/proc/cpuinfo", "model name");
  if (h.cpu_model.empty()) h.cpu_model = read_line_value("/proc/cpuinfo", "Model");
  if (h.cpu_model.empty()) h.cpu_model = "unknown";
  h.logical_cpus = std::thread::hardware_concurrency();
  const auto mem = read_line_value("/proc/meminfo", "MemTotal");
  if (!mem.empty()) h.ram_gb = std::stod(mem) / (1024.0 * 1024.0);  // kB
  utsname u{};
  h.os = uname(&u) == 0 ? std::string(u.sysname) + " " + u.release + " " + u.machine : "unknown";
  return h;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string report_to_json(const BenchmarkReport& r) {
  Json j;
  j["tool"] = "petcarbon";
  j["version"] = r.tool_version;
  j["config"] = Json::parse(config_to_json(r.config));
  j["host"] = {{"cpu_model", r.host.cpu_model},
               {"logical_cpus", r.host.logical_cpus},
               {"ram_gb", r.host.ram_gb},
               {"os", r.host.os},
               {"meter_backend", r.host.meter_backend}};
  j["started_at"] = r.started_at;
  j["finished_at"] = r.finished_at;
  Json results = Json::array();
  for (const auto& p : r.results) results.push_back(pair_json(p));
  j["results"] = results;
  Json ext = Json::array();
  for (const auto& e : r.external) {
    Json x;
    x["workload"] = e.workload;
    x["command"] = e.command;
    put_intensity(x, e.result.intensity);
    x["stats"] = stats_json(e.result.stats, e.result.mean_emissions_g);
    x["runs"] = runs_json(e.result.runs, e.result.intensity);
    ext.push_back(std::move(x));
  }
  j["external"] = ext;
  return j.dump(2);
}

BenchmarkReport report_from_json(std::string_view text) {
  BenchmarkReport r;
  try {
    const auto j = Json::parse(text);
    r.tool_version = j.at("version").get<std::string>();
    r.config = config_from_json(j.at("config").dump());
    const auto& h = j.at("host");
    r.host.cpu_model = h.at("cpu_model").get<std::string>();
    r.host.logical_cpus = h.at("logical_cpus").get<unsigned>();
    r.host.ram_gb = h.at("ram_gb").get<double>();
    r.host.os = h.at("os").get<std::string>();
    r.host.meter_backend = h.at("meter_backend").get<std::string>();
    r.started_at = j.at("started_at").get<std::string>();
    r.finished_at = j.at("finished_at").get<std::string>();
    for (const auto& p : j.at("results")) r.results.push_back(pair_from(p));
    for (const auto& x : j.at("external")) {
      ExternalEntry e;
      e.workload = x.at("workload").get<std::string>();
      e.command = x.at("command").get<std::string>();
      e.result.intensity = intensity_from(x);
      e.result.stats = stats_from(x.at("stats"), e.result.mean_emissions_g);
      e.result.runs = runs_from(x.at("runs"));
      r.external.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("report json: ") + e.what());
  }
  return r;
}

std::string report_to_csv(const BenchmarkReport& r) {
  std::string out(kCsvHeader);
  out += '\n';
  auto rows = [&](const std::string& workload, const std::vector<harness::RunRecord>& runs,
                  const carbon::CarbonIntensity& intensity) {
    for (const auto& run : runs) {
      const double kwh = run.breakdown.total_kwh;
      out += csv_field(workload) + ',' + std::string(harness::to_string(run.variant)) + ',' +
             std::to_string(run.run_index) + ',' + g17(kwh) + ',' +
             g17(carbon::emissions(kwh, intensity)) + ',' + g17(run.runtime_s) + '\n';
    }
  };
  for (const auto& p : r.results) rows(p.workload, p.runs, p.intensity);
  for (const auto& e : r.external) rows(e.workload, e.result.runs, e.result.intensity);
  return out;
}

void emit_report(const BenchmarkReport& report, const std::filesystem::path& path,
                 ReportFormat format) {
  const std::string body =
      format == ReportFormat::kJson ? report_to_json(report) + "\n" : report_to_csv(report);
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  f << body;
  f.close();
  if (!f) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace petcarbon::report

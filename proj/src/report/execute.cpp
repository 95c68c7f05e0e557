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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "petcarbon/common/error.hpp"
#include "petcarbon/common/symmetric.hpp"
#include "petcarbon/edb/index.hpp"
#include "petcarbon/edb/workloads.hpp"
#include "petcarbon/email/workloads.hpp"
#include "petcarbon/heml/workloads.hpp"
#include "petcarbon/report/cli.hpp"
#include "petcarbon/report/figures.hpp"
#include "petcarbon/web/workloads.hpp"

#ifndef PETCARBON_DATA_DIR
#define PETCARBON_DATA_DIR ""
#endif

namespace petcarbon::report {

namespace {

struct PlannedPair {
  harness::WorkloadPair pair;
  std::size_t iterations;
};

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("PETCARBON_DATA_DIR"); env && *env) return env;
  return PETCARBON_DATA_DIR;
}

// The bundled corpus is the generator's output at the bundled seed, so it can be
// rebuilt when the data directory is not around.
std::shared_ptr<const email::EmailCorpus> corpus_for(const std::optional<std::string>& dir) {
  if (dir) return std::make_shared<email::EmailCorpus>(email::load_corpus(*dir));
  const auto bundled = data_dir() / "email_corpus";
  std::error_code ec;
  if (!bundled.empty() && std::filesystem::is_directory(bundled, ec)) {
    return std::make_shared<email::EmailCorpus>(email::load_corpus(bundled));
  }
  email::EmailCorpus c;
  for (auto& m : email::generate_synthetic_corpus(email::kBundledCorpusSize,
                                                  email::kBundledCorpusSeed)) {
    c.messages.push_back(to_bytes(m));
  }
  return std::make_shared<email::EmailCorpus>(std::move(c));
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path);
  f << body;
}

std::vector<PlannedPair> plan(const RunConfig& c, std::ostream& log) {
  std::vector<PlannedPair> out;
  const std::size_t iters = default_iterations(c);
  if (c.suite == "email") {
    const auto corpus = corpus_for(c.email.corpus);
    std::vector<email::CipherSuite> suites;
    if (c.email.cipher == "all") {
      suites = {email::CipherSuite::kRsa, email::CipherSuite::kEcc,
                email::CipherSuite::kElGamalDsa};
    } else {
      suites = {email::parse_cipher_suite(c.email.cipher)};
    }
    const auto op = email::parse_crypto_op(c.email.op);
    for (auto s : suites) {
      out.push_back({email::crypto_suite_workloads(corpus, s, op, c.seed), iters});
    }
  } else if (c.suite == "web") {
    const auto site = c.web.site ? web::load_snapshot(*c.web.site) : web::bundled_site();
    web::WebSuiteOptions opt;
    opt.policy = c.web.keep_alive ? web::ConnectionPolicy::kKeepAlive
                                  : web::ConnectionPolicy::kFreshPerRequest;
    out.push_back({web::web_suite_workloads(site, opt), iters});
  } else if (c.suite == "heml") {
    for (auto d : c.heml.features) {
      const auto model = heml::prepare_heml(c.heml.samples, d, c.seed, c.heml.scale_bits);
      log << "heml d=" << d << ": training accuracy " << heml::accuracy(model.real, *model.data)
          << '\n';
      if (c.heml.model_out) {
        const auto path = c.heml.features.size() == 1
                              ? *c.heml.model_out
                              : with_suffix(*c.heml.model_out, "-d" + std::to_string(d));
        write_text(path, heml::to_json(model.quantized) + "\n");
      }
      for (auto b : c.heml.batch) {
        heml::HemlOptions opt;
        opt.batch = b;
        opt.key_seed = c.seed;
        out.push_back({heml::heml_suite_workloads(model, opt), default_iterations(c, b)});
      }
    }
  } else if (c.suite == "edb") {
    const auto base = corpus_for(c.edb.corpus);
    for (auto n : c.edb.db_sizes) {
      auto corpus = std::make_shared<email::EmailCorpus>(edb::corpus_of_size(*base, n));
      edb::EdbOptions opt;
      opt.query_seed = c.seed;
      opt.master_key = sym::sha256(as_bytes("petcarbon edb master " + std::to_string(c.seed)));
      out.push_back({edb::edb_suite_workloads(std::move(corpus), opt), iters});
    }
  } else if (c.suite == "external" && !c.external.baseline_cmd.empty()) {
    harness::WorkloadPair p;
    p.private_variant = std::make_unique<harness::ExternalCommandWorkload>(
        "external", harness::Variant::kPrivate, harness::split_command_line(c.external.cmd));
    p.baseline = std::make_unique<harness::ExternalCommandWorkload>(
        "external", harness::Variant::kPlaintext,
        harness::split_command_line(c.external.baseline_cmd));
    out.push_back({std::move(p), iters});
  }
  return out;
}

void print_pair(std::ostream& log, const harness::PairResult& p) {
  char buf[512];
  const std::string ratio = p.overhead_ratio ? std::to_string(*p.overhead_ratio) : "n/a";
  std::snprintf(buf, sizeof buf,
                "%-20s private %.6g kWh (%.6g g)  plaintext %.6g kWh (%.6g g)  ratio %s  [%s]\n",
                p.workload.c_str(), p.private_stats.mean_kwh, p.private_emissions_g,
                p.baseline_stats.mean_kwh, p.baseline_emissions_g, ratio.c_str(),
                p.intensity.country.c_str());
  log << buf;
}

}  // namespace

BenchmarkReport execute(const RunConfig& config, std::ostream& log) {
  validate(config);
  BenchmarkReport report;
  report.config = config;
  report.tool_version = std::string(tool_version());
  report.started_at = utc_timestamp();

  const auto file_table = config.intensity_file
                              ? std::optional(carbon::IntensityTable::load_csv(*config.intensity_file))
                              : std::nullopt;
  const auto& table = file_table ? *file_table : carbon::IntensityTable::builtin();
  const auto intensity = table.lookup(config.country, config.year);

  meter::MeterConfig mc;
  mc.backend = meter::parse_backend(config.meter.backend);
  mc.interval_ms = config.meter.interval_ms;
  mc.ram_installed_gb = config.meter.ram_gb;
  mc.powercap_root = config.meter.powercap_root;
  auto m = meter::Meter::open(mc);
  report.host = detect_host(meter::to_string(m.backend_kind()));

  auto pairs = plan(config, log);
  for (auto& planned : pairs) {
    harness::RunOptions opt;
    opt.iterations = planned.iterations;
    opt.warmup = config.warmup;
    log << "running " << planned.pair.private_variant->id() << " (" << opt.iterations
        << " runs per variant)\n";
    auto r = harness::run_pair(*planned.pair.private_variant, *planned.pair.baseline, opt, m,
                               intensity);
    print_pair(log, r);
    report.results.push_back(std::move(r));
  }
  if (config.suite == "external" && config.external.baseline_cmd.empty()) {
    const auto iters = default_iterations(config);
    log << "running external command (" << iters << " runs)\n";
    ExternalEntry e;
    e.workload = "external";
    e.command = config.external.cmd;
    e.result = harness::run_external(harness::split_command_line(config.external.cmd), iters, m,
                                     intensity, config.warmup);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-20s %.6g kWh (%.6g g) per run [%s]\n", "external",
                  e.result.stats.mean_kwh, e.result.mean_emissions_g, intensity.country.c_str());
    log << buf;
    report.external.push_back(std::move(e));
  }
  report.finished_at = utc_timestamp();

  if (config.out) emit_report(report, *config.out, ReportFormat::kJson);
  if (config.csv) emit_report(report, *config.csv, ReportFormat::kCsv);
  if (config.figures) {
    for (const auto& p : emit_figures(report, *config.figures)) log << "wrote " << p.string() << '\n';
  }
  return report;
}

}  // namespace petcarbon::report

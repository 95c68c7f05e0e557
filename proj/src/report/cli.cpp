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

#include "petcarbon/report/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <ostream>
#include <sstream>

#include "petcarbon/carbon/intensity.hpp"
#include "petcarbon/common/error.hpp"
#include "petcarbon/email/corpus.hpp"
#include "petcarbon/web/site.hpp"

#ifndef PETCARBON_VERSION_STRING
#define PETCARBON_VERSION_STRING "0.0.0"
#endif

namespace petcarbon::report {

namespace {

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorCode::kUsageError, msg); }

std::string suites_list() {
  std::string s;
  for (auto name : kSuites) {
    if (!s.empty()) s += '|';
    s += name;
  }
  return s;
}

// Flags that belong to one suite (or two, for --corpus).
struct SuiteFlag {
  CLI::Option* option;
  std::vector<std::string_view> suites;
};

}  // namespace

std::string_view tool_version() { return PETCARBON_VERSION_STRING; }

CliCommand parse_cli(const std::vector<std::string>& args) {
  CLI::App app{"Energy and carbon footprint of privacy-enhancing technologies, measured as "
               "private vs plaintext workload pairs.",
               "petcarbon"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);
  app.footer("Suites: " + suites_list());

  RunConfig defaults;
  RunConfig c;
  std::string suite, config_path, meter_backend = defaults.meter.backend, country, powercap_root;
  std::size_t iterations = 0, warmup = 0, requests = 0, queries = 0, samples = 0;
  int year = 0, interval_ms = 0, scale_bits = 0;
  double ram_gb = 0;
  std::string intensity_file, out, csv, figures, cipher, op, corpus, site, model_out, cmd,
      baseline_cmd;
  std::uint64_t seed = 0;
  std::vector<std::size_t> features, batch, db_sizes;
  bool keep_alive = false;

  auto* run = app.add_subcommand("run", "Run one suite's private/plaintext pairs under the meter");
  run->add_option("--suite", suite, "Suite: " + suites_list());
  run->add_option("--config", config_path, "JSON run config; flags given here override it");
  auto* o_iter = run->add_option("--iterations", iterations, "Measured runs per variant");
  auto* o_warm = run->add_option("--warmup", warmup, "Discarded runs per variant (default 5)");
  auto* o_country = run->add_option("--country", country, "ISO country code (default NL)");
  auto* o_year = run->add_option("--year", year, "Intensity year (default: latest)");
  auto* o_ifile = run->add_option("--intensity-file", intensity_file, "country,year,g_per_kwh CSV");
  auto* o_meter = run->add_option("--meter", meter_backend, "simulated|powercap");
  auto* o_interval = run->add_option("--interval-ms", interval_ms, "Sampling interval (default 1)");
  auto* o_ram = run->add_option("--ram-gb", ram_gb, "Installed RAM for the RAM power model");
  auto* o_root = run->add_option("--powercap-root", powercap_root, "powercap sysfs root");
  auto* o_out = run->add_option("--out", out, "JSON report path");
  auto* o_csv = run->add_option("--csv", csv, "CSV export path");
  auto* o_fig = run->add_option("--figures", figures, "Directory for energy.svg and emissions.svg");
  auto* o_seed = run->add_option("--seed", seed, "Seed for data, keys and query sequences");

  std::vector<SuiteFlag> suite_flags;
  auto flag_for = [&](CLI::Option* o, std::vector<std::string_view> s) {
    suite_flags.push_back({o, std::move(s)});
    return o;
  };
  auto* o_cipher = flag_for(run->add_option("--cipher", cipher, "email: rsa|ecc|elgamal|all"),
                            {"email"});
  auto* o_op = flag_for(run->add_option("--op", op, "email: encrypt|sign|both"), {"email"});
  auto* o_corpus =
      flag_for(run->add_option("--corpus", corpus, "email/edb: corpus directory"), {"email", "edb"});
  auto* o_requests =
      flag_for(run->add_option("--requests", requests, "web: requests per variant"), {"web"});
  auto* o_site = flag_for(run->add_option("--site", site, "web: snapshot directory"), {"web"});
  auto* o_keep =
      flag_for(run->add_flag("--keep-alive", keep_alive, "web: reuse one connection"), {"web"});
  auto* o_features = flag_for(
      run->add_option("--features", features, "heml: feature counts, e.g. 10,30,100,200")
          ->delimiter(','),
      {"heml"});
  auto* o_samples =
      flag_for(run->add_option("--samples", samples, "heml: dataset size"), {"heml"});
  auto* o_scale =
      flag_for(run->add_option("--scale-bits", scale_bits, "heml: fixed-point scale"), {"heml"});
  auto* o_batch = flag_for(
      run->add_option("--batch", batch, "heml: samples per run, e.g. 10,100")->delimiter(','),
      {"heml"});
  auto* o_model =
      flag_for(run->add_option("--model-out", model_out, "heml: quantized model JSON"), {"heml"});
  auto* o_sizes = flag_for(
      run->add_option("--db-sizes", db_sizes, "edb: documents, e.g. 50,200,1000")->delimiter(','),
      {"edb"});
  auto* o_queries =
      flag_for(run->add_option("--queries", queries, "edb: queries per variant"), {"edb"});
  auto* o_cmd = flag_for(run->add_option("--cmd", cmd, "external: private command line"),
                         {"external"});
  auto* o_bcmd = flag_for(
      run->add_option("--baseline-cmd", baseline_cmd, "external: plaintext command line"),
      {"external"});

  auto* intensity = app.add_subcommand("intensity", "Carbon-intensity table");
  auto* list = intensity->add_subcommand("list", "Print the table");
  list->add_option("--intensity-file", intensity_file, "country,year,g_per_kwh CSV");
  intensity->require_subcommand(1);

  GenerateArgs gen;
  auto* corpus_cmd = app.add_subcommand("corpus", "Synthetic email corpus");
  auto* corpus_gen = corpus_cmd->add_subcommand("generate", "Write msg_NNNN.txt files");
  corpus_gen->add_option("--out", gen.out, "Directory")->required();
  corpus_gen->add_option("--count", gen.count, "Messages")->default_val(email::kBundledCorpusSize);
  corpus_gen->add_option("--seed", gen.seed, "Seed")->default_val(email::kBundledCorpusSeed);
  corpus_cmd->require_subcommand(1);

  auto* site_cmd = app.add_subcommand("site", "Synthetic static web site");
  auto* site_gen = site_cmd->add_subcommand("generate", "Write files and manifest.txt");
  site_gen->add_option("--out", site, "Directory")->required();
  site_gen->add_option("--count", gen.count, "Files")->default_val(web::kBundledSiteFiles);
  site_gen->add_option("--seed", gen.seed, "Seed")->default_val(20240602);
  site_cmd->require_subcommand(1);

  CliCommand result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    std::ostringstream o, er;
    app.exit(e, o, er);
    result.kind = CommandKind::kPrint;
    result.text = o.str();
    return result;
  } catch (const CLI::ParseError& e) {
    usage(std::string(e.what()) + "\nRun with --help for more information.");
  }

  if (list->parsed()) {
    result.kind = CommandKind::kIntensityList;
    if (!intensity_file.empty()) result.intensity_file = intensity_file;
    return result;
  }
  if (corpus_gen->parsed()) {
    result.kind = CommandKind::kCorpusGenerate;
    result.generate = gen;
    return result;
  }
  if (site_gen->parsed()) {
    result.kind = CommandKind::kSiteGenerate;
    result.generate = gen;
    result.generate.out = site;
    return result;
  }

  // run
  if (!config_path.empty()) c = load_config(config_path);
  if (run->count("--suite")) c.suite = suite;
  if (c.suite.empty()) usage("run needs --suite (" + suites_list() + ") or --config");
  if (std::find(std::begin(kSuites), std::end(kSuites), c.suite) == std::end(kSuites)) {
    usage("unknown suite '" + c.suite + "' (expected " + suites_list() + ")");
  }
  for (const auto& f : suite_flags) {
    if (f.option->count() == 0) continue;
    if (std::find(f.suites.begin(), f.suites.end(), c.suite) == f.suites.end()) {
      usage(f.option->get_name() + " does not apply to --suite " + c.suite);
    }
  }
  const std::size_t aliases = o_iter->count() + o_requests->count() + o_queries->count();
  if (aliases > 1) usage("give only one of --iterations, --requests, --queries");

  if (o_iter->count()) c.iterations = iterations;
  if (o_requests->count()) c.iterations = requests;
  if (o_queries->count()) c.iterations = queries;
  if (o_warm->count()) c.warmup = warmup;
  if (o_country->count()) c.country = country;
  if (o_year->count()) c.year = year;
  if (o_ifile->count()) c.intensity_file = intensity_file;
  if (o_meter->count()) c.meter.backend = meter_backend;
  if (o_interval->count()) c.meter.interval_ms = interval_ms;
  if (o_ram->count()) c.meter.ram_gb = ram_gb;
  if (o_root->count()) c.meter.powercap_root = powercap_root;
  if (o_out->count()) c.out = out;
  if (o_csv->count()) c.csv = csv;
  if (o_fig->count()) c.figures = figures;
  if (o_seed->count()) c.seed = seed;
  if (o_cipher->count()) c.email.cipher = cipher;
  if (o_op->count()) c.email.op = op;
  if (o_corpus->count()) (c.suite == "email" ? c.email.corpus : c.edb.corpus) = corpus;
  if (o_site->count()) c.web.site = site;
  if (o_keep->count()) c.web.keep_alive = keep_alive;
  if (o_features->count()) c.heml.features = features;
  if (o_samples->count()) c.heml.samples = samples;
  if (o_scale->count()) c.heml.scale_bits = scale_bits;
  if (o_batch->count()) c.heml.batch = batch;
  if (o_model->count()) c.heml.model_out = model_out;
  if (o_sizes->count()) c.edb.db_sizes = db_sizes;
  if (o_cmd->count()) c.external.cmd = cmd;
  if (o_bcmd->count()) c.external.baseline_cmd = baseline_cmd;
  validate(c);

  result.kind = CommandKind::kRun;
  result.config = std::move(c);
  return result;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto cmd = parse_cli(args);
    switch (cmd.kind) {
      case CommandKind::kPrint:
        out << cmd.text;
        return 0;
      case CommandKind::kIntensityList: {
        const auto table = cmd.intensity_file
                               ? carbon::IntensityTable::load_csv(*cmd.intensity_file)
                               : carbon::IntensityTable::builtin();
        out << "country,year,g_per_kwh\n";
        for (const auto& r : table.rows()) {
          out << r.country << ',' << r.year << ',' << r.g_per_kwh << '\n';
        }
        return 0;
      }
      case CommandKind::kCorpusGenerate:
        email::write_corpus(cmd.generate.out,
                            email::generate_synthetic_corpus(cmd.generate.count, cmd.generate.seed));
        out << "wrote " << cmd.generate.count << " messages to " << cmd.generate.out << '\n';
        return 0;
      case CommandKind::kSiteGenerate: {
        const auto s = web::generate_synthetic_site(cmd.generate.out, cmd.generate.seed,
                                                    cmd.generate.count);
        out << "wrote " << s.resources.size() << " files (" << s.total_bytes() << " bytes) to "
            << cmd.generate.out << '\n';
        return 0;
      }
      case CommandKind::kRun:
        execute(cmd.config, out);
        return 0;
    }
  } catch (const Error& e) {
    err << "petcarbon: " << e.what() << '\n';
    return e.code() == ErrorCode::kUsageError || e.code() == ErrorCode::kUnknownCountry ? 2 : 1;
  } catch (const std::exception& e) {
    err << "petcarbon: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace petcarbon::report

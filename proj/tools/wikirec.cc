// Copyright 2026 The wikirec Authors.
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

// Command-line front end: corpus ingestion, synthetic data, batch
// generation, simulated organizer decisions, evaluation and the HTTP service.

#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "wikirec/config.h"
#include "wikirec/corpus.h"
#include "wikirec/evalkit.h"
#include "wikirec/pipeline.h"
#include "wikirec/service.h"
#include "wikirec/store.h"
#include "wikirec/synthetic.h"

namespace fs = std::filesystem;
using namespace wikirec;

namespace {

Service* g_service = nullptr;

void HandleSignal(int) {
  if (g_service) g_service->Stop();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out.flush()) throw std::runtime_error("cannot write " + path.string());
}

Instant ParseArgInstant(const std::string& text, const char* option) {
  try {
    return ParseInstant(text);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(fmt::format("{}: {}", option, e.what()));
  }
}

Config EffectiveConfig(const DataStore& store, const std::string& config_file) {
  if (config_file.empty()) return store.config();
  return ApplyConfig(store.config(), ReadKeyValueFile(config_file));
}

void PrintCounts(const Corpus& corpus) {
  const CorpusCounts c = corpus.counts();
  fmt::print("editors {}\nedits {}\narticles {}\nprojects {}\ninteractions {}\ncategories {}\n",
             c.editors, c.edits, c.articles, c.projects, c.interactions, c.categories);
}

void EnsureFreshOutputs(const fs::path& data, bool force) {
  const DataPaths paths = DataPaths::At(data);
  for (const auto& p : {paths.batches, paths.ledger, paths.feedback}) {
    if (!fs::exists(p)) continue;
    if (!force) {
      throw std::runtime_error(p.string() +
                               " already exists and would no longer match the corpus "
                               "(use --force to remove it)");
    }
    fs::remove(p);
  }
}

void PrintBatchSummary(const std::vector<Batch>& batches, std::size_t issued) {
  fmt::print("batches {}\nrecommendations {}\n", batches.size(), issued);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newcomer recommendations for WikiProjects"};
  app.require_subcommand(1);
  std::string data_dir = "data";
  if (const char* env = std::getenv("WIKIREC_DATA_DIR"); env && *env) data_dir = env;
  app.add_option("--data", data_dir, "Data directory")->capture_default_str();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate and normalize a trace corpus");
  std::string ingest_dir;
  std::string ingest_as_of;
  bool ingest_force = false;
  ingest->add_option("dir", ingest_dir, "Directory with the five .jsonl trace files")
      ->required();
  ingest->add_option("--as-of", ingest_as_of, "Corpus reference instant (UTC)");
  ingest->add_flag("--force", ingest_force, "Remove existing batches, ledger and feedback");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic corpus");
  SyntheticParams sp;
  std::string synth_out;
  bool synth_force = false;
  synth->add_option("--editors", sp.editor_count)->capture_default_str();
  synth->add_option("--projects", sp.project_count)->capture_default_str();
  synth->add_option("--categories", sp.category_count)->capture_default_str();
  synth->add_option("--weeks", sp.weeks)->capture_default_str();
  synth->add_option("--seed", sp.seed)->capture_default_str();
  synth->add_option("--out", synth_out, "Output data directory (default: --data)");
  synth->add_flag("--force", synth_force, "Remove existing batches, ledger and feedback");

  // gen-batch
  auto* gen = app.add_subcommand("gen-batch", "Generate one batch per project");
  std::string gen_as_of;
  std::string gen_config;
  std::string gen_project;
  gen->add_option("--as-of", gen_as_of, "Batch instant (UTC)")->required();
  gen->add_option("--config", gen_config, "key = value overrides");
  gen->add_option("--project", gen_project, "Only this project");

  // run-schedule
  auto* sched = app.add_subcommand("run-schedule", "Generate weekly batches over a range");
  std::string sched_start;
  int sched_weeks = 0;
  std::string sched_config;
  sched->add_option("--start", sched_start,
                    "Schedule start; batches run one cadence after it (default: as_of - weeks)");
  sched->add_option("--weeks", sched_weeks)->required();
  sched->add_option("--config", sched_config, "key = value overrides");

  // simulate-decisions
  auto* sim = app.add_subcommand("simulate-decisions",
                                 "Record synthetic organizer decisions for undecided recommendations");
  std::uint64_t sim_seed = 1;
  sim->add_option("--seed", sim_seed)->capture_default_str();

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Compute metrics and impact reports");
  std::string eval_out;
  std::string eval_signal = "invited";
  eval->add_option("--out", eval_out, "Directory for metrics.json, impact.json, report.txt")
      ->required();
  eval->add_option("--join-signal", eval_signal, "invited | joined")
      ->check(CLI::IsMember({"invited", "joined"}))
      ->capture_default_str();

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the JSON API");
  ApiConfig api;
  std::optional<int> serve_port;
  std::string serve_token;
  serve->add_option("--port", serve_port, "Listen port (default 8080 or WIKIREC_PORT)");
  serve->add_option("--host", api.host)->capture_default_str();
  serve->add_option("--token", serve_token, "Shared secret for mutating endpoints");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      const CorpusPaths paths = CorpusPaths::InDirectory(ingest_dir);
      Instant as_of;
      if (!ingest_as_of.empty()) {
        as_of = ParseArgInstant(ingest_as_of, "--as-of");
      } else {
        const fs::path conf = DataPaths::At(data_dir).config;
        std::optional<Instant> from_conf;
        if (fs::exists(conf)) {
          const KeyValues kv = ReadKeyValueFile(conf);
          if (auto it = kv.find(kCorpusAsOfKey); it != kv.end()) {
            from_conf = ParseInstant(it->second);
          }
        }
        if (!from_conf) throw std::invalid_argument("ingest needs --as-of");
        as_of = *from_conf;
      }
      const Corpus corpus = LoadCorpus(paths, as_of);
      EnsureFreshOutputs(data_dir, ingest_force);
      InitDataDir(data_dir, corpus);
      PrintCounts(corpus);
    } else if (*synth) {
      const fs::path out = synth_out.empty() ? fs::path(data_dir) : fs::path(synth_out);
      const Corpus corpus = GenerateSynthetic(sp);
      EnsureFreshOutputs(out, synth_force);
      InitDataDir(out, corpus);
      PrintCounts(corpus);
    } else if (*gen) {
      DataStore store = DataStore::Open(data_dir);
      const Config config = EffectiveConfig(store, gen_config);
      const Instant as_of = ParseArgInstant(gen_as_of, "--as-of");
      RecommendationLedger ledger = store.ledger();
      std::vector<Batch> batches;
      if (!gen_project.empty()) {
        const ProjectIndex p = store.corpus().ProjectIndexOf(gen_project);
        batches.push_back(GenerateBatch(p, store.corpus(), as_of, ledger, config));
      } else {
        if (as_of > store.corpus().as_of()) {
          throw std::invalid_argument("--as-of is after the corpus as_of " +
                                      FormatInstant(store.corpus().as_of()));
        }
        const ProfileSnapshot snapshot = ProfileSnapshot::Build(store.corpus(), as_of, config);
        batches = GenerateAllBatches(store.corpus(), snapshot, ledger, config);
      }
      const std::size_t issued = ledger.size() - store.ledger().size();
      PrintBatchSummary(batches, issued);
      store.CommitBatches(std::move(batches), std::move(ledger));
    } else if (*sched) {
      DataStore store = DataStore::Open(data_dir);
      const Config config = EffectiveConfig(store, sched_config);
      const Instant start =
          sched_start.empty()
              ? store.corpus().as_of() - Days(config.cadence_days * sched_weeks)
              : ParseArgInstant(sched_start, "--start");
      RecommendationLedger ledger = store.ledger();
      std::vector<Batch> batches =
          RunSchedule(store.corpus(), start, sched_weeks, ledger, config);
      const std::size_t issued = ledger.size() - store.ledger().size();
      PrintBatchSummary(batches, issued);
      store.CommitBatches(std::move(batches), std::move(ledger));
    } else if (*sim) {
      DataStore store = DataStore::Open(data_dir);
      std::vector<LedgerEntry> pending;
      for (const auto& e : store.ledger().entries()) {
        if (!store.HasDecision(e.batch_id, e.editor_id, e.algorithm)) pending.push_back(e);
      }
      const auto records = SimulateFeedback(pending, sim_seed);
      if (!records.empty()) store.CommitFeedback(records);
      fmt::print("decisions {}\n", records.size());
    } else if (*eval) {
      const DataStore store = DataStore::Open(data_dir);
      const MetricsReport metrics = ComputeMetrics(store.feedback());
      const ImpactReport impact =
          ImpactAnalysis(store.feedback(), store.corpus(), store.config().impact_window_days,
                         eval_signal == "joined" ? JoinSignal::kJoined : JoinSignal::kInvited,
                         store.config());
      fs::create_directories(eval_out);
      WriteText(fs::path(eval_out) / "metrics.json", MetricsToJson(metrics).dump(2) + "\n");
      WriteText(fs::path(eval_out) / "impact.json", ImpactToJson(impact).dump(2) + "\n");
      const std::string table = FormatReportTable(metrics, impact);
      WriteText(fs::path(eval_out) / "report.txt", table);
      std::fputs(table.c_str(), stdout);
    } else if (*serve) {
      api = ApplyEnvironment(api);
      api.data_dir = data_dir;  // already defaults to WIKIREC_DATA_DIR
      if (serve_port) api.port = *serve_port;
      if (!serve_token.empty()) api.token = serve_token;
      Service service(DataStore::Open(api.data_dir), api.token);
      g_service = &service;
      std::signal(SIGINT, HandleSignal);
      std::signal(SIGTERM, HandleSignal);
      std::thread announce([&] {
        while (!service.ready()) std::this_thread::sleep_for(std::chrono::milliseconds(10));
        fmt::print("listening on {}:{}\n", api.host, service.port());
        std::fflush(stdout);
      });
      announce.detach();
      service.Listen(api.host, api.port);
      g_service = nullptr;
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "wikirec: error: {}\n", e.what());
    return 1;
  }
  return 0;
}

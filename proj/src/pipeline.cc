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

#include "wikirec/pipeline.h"

#include <stdexcept>

namespace wikirec {
namespace {

std::string CompactInstant(Instant t) {
  std::string s = FormatInstant(t);  // YYYY-MM-DDTHH:MM:SSZ
  std::string out;
  for (char c : s) {
    if (c != '-' && c != ':') out.push_back(c);
  }
  return out;
}

}  // namespace

const BatchCell* Batch::FindCell(Algorithm algorithm, ExperienceTier pool) const {
  for (const auto& cell : cells) {
    if (cell.algorithm == algorithm && cell.pool == pool) return &cell;
  }
  return nullptr;
}

std::string RecommendationLedger::PairKey(const std::string& project,
                                          const std::string& editor) {
  std::string key = project;
  key.push_back('\x1f');
  key += editor;
  return key;
}

void RecommendationLedger::Append(LedgerEntry entry) {
  issued_pairs_.insert(PairKey(entry.project_id, entry.editor_id));
  std::string rec = entry.batch_id;
  rec.push_back('\x1f');
  rec += entry.editor_id;
  rec.push_back('\x1f');
  rec += AlgorithmName(entry.algorithm);
  by_recommendation_.emplace(std::move(rec), entries_.size());
  entries_.push_back(std::move(entry));
}

std::size_t RecommendationLedger::RecordBatch(const std::string& project_id,
                                              const std::string& batch_id) {
  if (!batch_ids_.insert(batch_id).second) {
    throw std::invalid_argument("batch id \"" + batch_id + "\" already exists");
  }
  return batches_per_project_[project_id]++;
}

bool RecommendationLedger::WasIssued(const std::string& project_id,
                                     const std::string& editor_id) const {
  return issued_pairs_.contains(PairKey(project_id, editor_id));
}

std::size_t RecommendationLedger::BatchCount(const std::string& project_id) const {
  auto it = batches_per_project_.find(project_id);
  return it == batches_per_project_.end() ? 0 : it->second;
}

bool RecommendationLedger::HasBatch(const std::string& batch_id) const {
  return batch_ids_.contains(batch_id);
}

const LedgerEntry* RecommendationLedger::Find(const std::string& batch_id,
                                              const std::string& editor_id,
                                              Algorithm algorithm) const {
  std::string rec = batch_id;
  rec.push_back('\x1f');
  rec += editor_id;
  rec.push_back('\x1f');
  rec += AlgorithmName(algorithm);
  auto it = by_recommendation_.find(rec);
  return it == by_recommendation_.end() ? nullptr : &entries_[it->second];
}

std::string MakeBatchId(const std::string& project_id, Instant as_of,
                        std::size_t ordinal) {
  return project_id + "/" + CompactInstant(as_of) + "/" + std::to_string(ordinal);
}

Batch AssembleBatch(const ProjectScorer& scorer, const RecommendationLedger& ledger,
                    const Config& config, std::string batch_id, Execution execution) {
  const Corpus& corpus = scorer.corpus();
  const auto& project_id = corpus.project(scorer.project()).id;
  Batch batch;
  batch.batch_id = std::move(batch_id);
  batch.project_id = project_id;
  batch.as_of = scorer.snapshot().as_of();
  batch.config_snapshot = ConfigToKeyValues(config);

  std::function<bool(EditorIndex)> exclude;
  if (!config.allow_rerecommend) {
    exclude = [&](EditorIndex e) {
      return ledger.WasIssued(project_id, corpus.editor(e).id);
    };
  }
  const auto n = static_cast<std::size_t>(config.per_cell_n);
  for (Algorithm algorithm : kAllAlgorithms) {
    const std::vector<double> scores = scorer.ScoreEligible(algorithm, execution);
    for (ExperienceTier pool : kPools) {
      batch.cells.push_back(
          {algorithm, pool, RankScored(scorer, scores, pool, algorithm, n, exclude)});
    }
  }
  return batch;
}

namespace {

void IssueBatch(const Batch& batch, RecommendationLedger& ledger) {
  for (const auto& cell : batch.cells) {
    for (std::size_t i = 0; i < cell.candidates.size(); ++i) {
      const auto& c = cell.candidates[i];
      ledger.Append({batch.project_id, c.editor_id, batch.batch_id, cell.algorithm,
                     cell.pool, c.score, i + 1, batch.as_of});
    }
  }
}

void RequireVisible(const Corpus& corpus, Instant as_of) {
  if (as_of > corpus.as_of()) {
    throw std::invalid_argument("batch as_of " + FormatInstant(as_of) +
                                " is after the corpus as_of " +
                                FormatInstant(corpus.as_of()));
  }
}

}  // namespace

Batch GenerateBatch(ProjectIndex project, const Corpus& corpus,
                    const ProfileSnapshot& snapshot, RecommendationLedger& ledger,
                    const Config& config) {
  RequireVisible(corpus, snapshot.as_of());
  const ProjectScorer scorer(corpus, snapshot, project, config);
  const auto& project_id = corpus.project(project).id;
  const std::string id =
      MakeBatchId(project_id, snapshot.as_of(), ledger.BatchCount(project_id));
  Batch batch = AssembleBatch(scorer, ledger, config, id, Execution::kParallel);
  ledger.RecordBatch(project_id, batch.batch_id);
  IssueBatch(batch, ledger);
  return batch;
}

Batch GenerateBatch(ProjectIndex project, const Corpus& corpus, Instant as_of,
                    RecommendationLedger& ledger, const Config& config) {
  RequireVisible(corpus, as_of);
  const ProfileSnapshot snapshot = ProfileSnapshot::Build(corpus, as_of, config);
  return GenerateBatch(project, corpus, snapshot, ledger, config);
}

std::vector<Batch> GenerateAllBatches(const Corpus& corpus,
                                      const ProfileSnapshot& snapshot,
                                      RecommendationLedger& ledger,
                                      const Config& config, Execution execution) {
  RequireVisible(corpus, snapshot.as_of());
  const auto projects = static_cast<std::int64_t>(corpus.projects().size());
  std::vector<Batch> batches(static_cast<std::size_t>(projects));
  // Dedupe is per project, so concurrent cells only read ledger rows that no
  // other project's batch can add.
#pragma omp parallel for schedule(dynamic, 1) if (execution == Execution::kParallel)
  for (std::int64_t p = 0; p < projects; ++p) {
    const auto project = static_cast<ProjectIndex>(p);
    const ProjectScorer scorer(corpus, snapshot, project, config);
    const auto& project_id = corpus.project(project).id;
    batches[static_cast<std::size_t>(p)] = AssembleBatch(
        scorer, ledger, config,
        MakeBatchId(project_id, snapshot.as_of(), ledger.BatchCount(project_id)),
        Execution::kSerial);
  }
  for (const auto& batch : batches) {
    ledger.RecordBatch(batch.project_id, batch.batch_id);
    IssueBatch(batch, ledger);
  }
  return batches;
}

std::vector<Instant> ScheduleInstants(Instant start, int weeks, const Config& config) {
  if (weeks < 1) throw std::invalid_argument("weeks must be >= 1");
  std::vector<Instant> out;
  for (int w = 1; w <= weeks; ++w) out.push_back(start + Days(config.cadence_days * w));
  return out;
}

std::vector<Batch> RunSchedule(const Corpus& corpus, Instant start, int weeks,
                               RecommendationLedger& ledger, const Config& config,
                               Execution execution) {
  const auto instants = ScheduleInstants(start, weeks, config);
  RequireVisible(corpus, instants.back());
  std::vector<Batch> all;
  for (Instant as_of : instants) {
    const ProfileSnapshot snapshot =
        ProfileSnapshot::Build(corpus, as_of, config, execution);
    auto week = GenerateAllBatches(corpus, snapshot, ledger, config, execution);
    std::move(week.begin(), week.end(), std::back_inserter(all));
  }
  return all;
}

Json BatchToJson(const Batch& batch) {
  Json cells = Json::array();
  for (const auto& cell : batch.cells) {
    Json candidates = Json::array();
    for (std::size_t i = 0; i < cell.candidates.size(); ++i) {
      const auto& c = cell.candidates[i];
      candidates.push_back({{"editor_id", c.editor_id},
                            {"rank", i + 1},
                            {"score", c.score},
                            {"explanation", c.explanation}});
    }
    cells.push_back({{"algorithm", std::string(AlgorithmName(cell.algorithm))},
                     {"pool", std::string(TierName(cell.pool))},
                     {"candidates", candidates}});
  }
  Json config = Json::object();
  for (const auto& [k, v] : batch.config_snapshot) config[k] = v;
  return {{"batch_id", batch.batch_id},
          {"project_id", batch.project_id},
          {"as_of", FormatInstant(batch.as_of)},
          {"cells", cells},
          {"config_snapshot", config}};
}

namespace {

Algorithm RequireAlgorithm(const Json& obj) {
  const std::string& name = RequireString(obj, "algorithm");
  auto a = ParseAlgorithm(name);
  if (!a) throw RecordError("algorithm", "unknown algorithm \"" + name + "\"");
  return *a;
}

ExperienceTier RequirePool(const Json& obj) {
  const std::string& name = RequireString(obj, "pool");
  auto t = ParseTier(name);
  if (!t || *t == ExperienceTier::kHighlyExperienced) {
    throw RecordError("pool", "unknown pool \"" + name + "\"");
  }
  return *t;
}

}  // namespace

Batch BatchFromJson(const Json& obj) {
  Batch b;
  b.batch_id = RequireString(obj, "batch_id");
  b.project_id = RequireString(obj, "project_id");
  b.as_of = RequireInstant(obj, "as_of");
  auto cells = obj.find("cells");
  if (cells == obj.end() || !cells->is_array()) {
    throw RecordError("cells", "field \"cells\" must be an array");
  }
  for (const auto& c : *cells) {
    BatchCell cell;
    cell.algorithm = RequireAlgorithm(c);
    cell.pool = RequirePool(c);
    auto cands = c.find("candidates");
    if (cands == c.end() || !cands->is_array()) {
      throw RecordError("candidates", "field \"candidates\" must be an array");
    }
    for (const auto& x : *cands) {
      if (RequireInt(x, "rank") != static_cast<std::int64_t>(cell.candidates.size() + 1)) {
        throw RecordError("rank", "candidate ranks must be consecutive from 1");
      }
      cell.candidates.push_back({RequireString(x, "editor_id"), cell.algorithm,
                                 RequireNumber(x, "score"),
                                 RequireString(x, "explanation")});
    }
    b.cells.push_back(std::move(cell));
  }
  auto config = obj.find("config_snapshot");
  if (config == obj.end() || !config->is_object()) {
    throw RecordError("config_snapshot", "field \"config_snapshot\" must be an object");
  }
  for (const auto& [k, v] : config->items()) {
    if (!v.is_string()) throw RecordError("config_snapshot", "config values are strings");
    b.config_snapshot[k] = v.get<std::string>();
  }
  return b;
}

Json LedgerEntryToJson(const LedgerEntry& e) {
  return {{"project_id", e.project_id},
          {"editor_id", e.editor_id},
          {"batch_id", e.batch_id},
          {"algorithm", std::string(AlgorithmName(e.algorithm))},
          {"pool", std::string(TierName(e.pool))},
          {"score", e.score},
          {"rank", e.rank},
          {"issued_at", FormatInstant(e.issued_at)}};
}

LedgerEntry LedgerEntryFromJson(const Json& obj) {
  LedgerEntry e;
  e.project_id = RequireString(obj, "project_id");
  e.editor_id = RequireString(obj, "editor_id");
  e.batch_id = RequireString(obj, "batch_id");
  e.algorithm = RequireAlgorithm(obj);
  e.pool = RequirePool(obj);
  e.score = RequireNumber(obj, "score");
  const auto rank = RequireInt(obj, "rank");
  if (rank < 1) throw RecordError("rank", "rank must be >= 1");
  e.rank = static_cast<std::size_t>(rank);
  e.issued_at = RequireInstant(obj, "issued_at");
  return e;
}

}  // namespace wikirec

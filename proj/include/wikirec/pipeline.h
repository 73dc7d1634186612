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

#ifndef WIKIREC_PIPELINE_H_
#define WIKIREC_PIPELINE_H_

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wikirec/config.h"
#include "wikirec/corpus.h"
#include "wikirec/jsonl.h"
#include "wikirec/ranking.h"
#include "wikirec/recommenders.h"

namespace wikirec {

struct BatchCell {
  Algorithm algorithm = Algorithm::kRuleBased;
  ExperienceTier pool = ExperienceTier::kBrandNew;
  std::vector<ScoredCandidate> candidates;  // rank i+1 at position i

  bool operator==(const BatchCell&) const = default;
};

struct Batch {
  std::string batch_id;
  std::string project_id;
  Instant as_of{};
  std::vector<BatchCell> cells;  // algorithm-major, brand-new pool first
  KeyValues config_snapshot;

  const BatchCell* FindCell(Algorithm algorithm, ExperienceTier pool) const;
  bool operator==(const Batch&) const = default;
};

struct LedgerEntry {
  std::string project_id;
  std::string editor_id;
  std::string batch_id;
  Algorithm algorithm = Algorithm::kRuleBased;
  ExperienceTier pool = ExperienceTier::kBrandNew;
  double score = 0.0;
  std::size_t rank = 0;
  Instant issued_at{};

  bool operator==(const LedgerEntry&) const = default;
};

// Append-only record of every issued recommendation and every batch.
class RecommendationLedger {
 public:
  void Append(LedgerEntry entry);
  // Registers a batch and returns its ordinal among the project's batches.
  std::size_t RecordBatch(const std::string& project_id, const std::string& batch_id);

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool WasIssued(const std::string& project_id, const std::string& editor_id) const;
  std::size_t BatchCount(const std::string& project_id) const;
  bool HasBatch(const std::string& batch_id) const;
  // The entry for (batch, editor, algorithm), if issued.
  const LedgerEntry* Find(const std::string& batch_id, const std::string& editor_id,
                          Algorithm algorithm) const;

 private:
  static std::string PairKey(const std::string& project, const std::string& editor);
  std::vector<LedgerEntry> entries_;
  std::unordered_set<std::string> issued_pairs_;
  std::unordered_map<std::string, std::size_t> by_recommendation_;
  std::unordered_map<std::string, std::size_t> batches_per_project_;
  std::unordered_set<std::string> batch_ids_;
};

// "<project_id>/<YYYYMMDDTHHMMSSZ>/<ordinal>".
std::string MakeBatchId(const std::string& project_id, Instant as_of,
                        std::size_t ordinal);

// Scores and assembles all eight cells for one project; ledger editors are
// excluded before truncation unless allow_rerecommend is set. Does not touch
// the ledger.
Batch AssembleBatch(const ProjectScorer& scorer, const RecommendationLedger& ledger,
                    const Config& config, std::string batch_id,
                    Execution execution = Execution::kSerial);

// Assembles the batch, registers it and appends every issued recommendation
// to the ledger. Requires as_of <= corpus.as_of().
Batch GenerateBatch(ProjectIndex project, const Corpus& corpus,
                    const ProfileSnapshot& snapshot, RecommendationLedger& ledger,
                    const Config& config);
Batch GenerateBatch(ProjectIndex project, const Corpus& corpus, Instant as_of,
                    RecommendationLedger& ledger, const Config& config);

// One batch per project at the snapshot's as_of, in project order. Projects
// are scored in parallel; ledger appends happen afterwards, serially.
std::vector<Batch> GenerateAllBatches(const Corpus& corpus,
                                      const ProfileSnapshot& snapshot,
                                      RecommendationLedger& ledger,
                                      const Config& config,
                                      Execution execution = Execution::kParallel);

// Batches at start + cadence, start + 2 * cadence, ... (weeks of them).
std::vector<Batch> RunSchedule(const Corpus& corpus, Instant start, int weeks,
                               RecommendationLedger& ledger, const Config& config,
                               Execution execution = Execution::kParallel);

// Schedule instants used by RunSchedule.
std::vector<Instant> ScheduleInstants(Instant start, int weeks, const Config& config);

// JSON forms used by batches.jsonl and ledger.jsonl.
Json BatchToJson(const Batch& batch);
Batch BatchFromJson(const Json& obj);
Json LedgerEntryToJson(const LedgerEntry& entry);
LedgerEntry LedgerEntryFromJson(const Json& obj);

}  // namespace wikirec

#endif  // WIKIREC_PIPELINE_H_

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

#ifndef WIKIREC_STORE_H_
#define WIKIREC_STORE_H_

// The on-disk data directory shared by the CLI and the service:
//
//   <root>/wikirec.conf     key = value settings, including corpus_as_of
//   <root>/corpus/*.jsonl   the normalized trace files
//   <root>/batches.jsonl    one Batch per line, append-only
//   <root>/ledger.jsonl     one LedgerEntry per line, append-only
//   <root>/feedback.jsonl   one FeedbackRecord per line, append-only

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wikirec/config.h"
#include "wikirec/corpus.h"
#include "wikirec/evalkit.h"
#include "wikirec/pipeline.h"

namespace wikirec {

struct DataPaths {
  std::filesystem::path root;
  std::filesystem::path config;
  std::filesystem::path corpus_dir;
  std::filesystem::path batches;
  std::filesystem::path ledger;
  std::filesystem::path feedback;

  static DataPaths At(const std::filesystem::path& root);
};

// Key in wikirec.conf holding the corpus reference instant.
inline constexpr const char* kCorpusAsOfKey = "corpus_as_of";

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes the corpus under <root>/corpus and records its as_of (and any
// `settings`) in wikirec.conf, keeping keys already there.
void InitDataDir(const std::filesystem::path& root, const Corpus& corpus,
                 const KeyValues& settings = {});

// Appends whole lines to several files as one unit: if any write fails, every
// file is truncated back to its previous length.
void AtomicAppend(const std::vector<std::pair<std::filesystem::path, std::string>>& writes);

// In-memory view of a data directory. Not thread-safe; callers serialize
// mutations.
class DataStore {
 public:
  // Loads everything. Missing batches/ledger/feedback files count as empty.
  static DataStore Open(const std::filesystem::path& root);

  const DataPaths& paths() const { return paths_; }
  const KeyValues& settings() const { return settings_; }
  const Config& config() const { return config_; }
  const Corpus& corpus() const { return corpus_; }
  const std::vector<Batch>& batches() const { return batches_; }
  const RecommendationLedger& ledger() const { return ledger_; }
  const std::vector<FeedbackRecord>& feedback() const { return feedback_; }

  const Batch* FindBatch(const std::string& batch_id) const;
  std::vector<const Batch*> BatchesOf(const std::string& project_id) const;
  bool HasDecision(const std::string& batch_id, const std::string& editor_id,
                   Algorithm algorithm) const;

  // Persists batches produced against this store's ledger. `ledger` must be
  // a copy of ledger() extended by exactly these batches.
  void CommitBatches(std::vector<Batch> batches, RecommendationLedger ledger);

  // Checks every record against the ledger (issued, unique, not yet decided)
  // and appends them all or none. Throws DecisionError.
  void CommitFeedback(const std::vector<FeedbackRecord>& records);

 private:
  DataPaths paths_;
  KeyValues settings_;
  Config config_;
  Corpus corpus_;
  std::vector<Batch> batches_;
  std::unordered_map<std::string, std::size_t> batch_index_;
  RecommendationLedger ledger_;
  std::vector<FeedbackRecord> feedback_;
  std::unordered_set<std::string> decided_;
};

class DecisionError : public std::runtime_error {
 public:
  enum class Kind { kInvalid, kUnknownBatch, kNotIssued, kDuplicate };
  DecisionError(Kind kind, std::string field, const std::string& message)
      : std::runtime_error(message), kind_(kind), field_(std::move(field)) {}
  Kind kind() const { return kind_; }
  const std::string& field() const { return field_; }

 private:
  Kind kind_;
  std::string field_;
};

}  // namespace wikirec

#endif  // WIKIREC_STORE_H_

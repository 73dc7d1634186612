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

#include "wikirec/store.h"

#include <fstream>
#include <system_error>

#include <fmt/format.h>

namespace wikirec {
namespace fs = std::filesystem;

namespace {

std::string DecisionKey(const std::string& batch_id, const std::string& editor_id,
                        Algorithm algorithm) {
  return batch_id + '\x1f' + editor_id + '\x1f' + std::string(AlgorithmName(algorithm));
}

template <typename Fn>
void ReadLines(const fs::path& path, Fn&& fn) {
  if (!fs::exists(path)) return;
  try {
    ForEachJsonLine(path, fn);
  } catch (const RecordError& e) {
    throw StoreError(fmt::format("{}: {}", path.string(), e.what()));
  } catch (const std::invalid_argument& e) {
    throw StoreError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace

DataPaths DataPaths::At(const fs::path& root) {
  return {root,
          root / "wikirec.conf",
          root / "corpus",
          root / "batches.jsonl",
          root / "ledger.jsonl",
          root / "feedback.jsonl"};
}

void InitDataDir(const fs::path& root, const Corpus& corpus, const KeyValues& settings) {
  const DataPaths paths = DataPaths::At(root);
  fs::create_directories(paths.corpus_dir);
  WriteCorpus(corpus, paths.corpus_dir);
  KeyValues kv;
  if (fs::exists(paths.config)) kv = ReadKeyValueFile(paths.config);
  for (const auto& [k, v] : settings) kv[k] = v;
  kv[kCorpusAsOfKey] = FormatInstant(corpus.as_of());
  std::ofstream out(paths.config, std::ios::binary | std::ios::trunc);
  out << FormatKeyValues(kv);
  if (!out.flush()) throw StoreError("cannot write " + paths.config.string());
}

void AtomicAppend(const std::vector<std::pair<fs::path, std::string>>& writes) {
  struct Prior {
    fs::path path;
    bool existed;
    std::uintmax_t size;
  };
  std::vector<Prior> priors;
  auto rollback = [&] {
    for (const auto& p : priors) {
      std::error_code ec;
      if (p.existed) {
        fs::resize_file(p.path, p.size, ec);
      } else {
        fs::remove(p.path, ec);
      }
    }
  };
  try {
    for (const auto& [path, text] : writes) {
      std::error_code ec;
      const bool existed = fs::is_regular_file(path, ec);
      priors.push_back({path, existed, existed ? fs::file_size(path) : 0});
      std::ofstream out(path, std::ios::binary | std::ios::app);
      if (!out) throw StoreError("cannot open " + path.string() + " for append");
      out << text;
      if (!out.flush()) throw StoreError("write to " + path.string() + " failed");
    }
  } catch (...) {
    rollback();
    throw;
  }
}

DataStore DataStore::Open(const fs::path& root) {
  DataStore store;
  store.paths_ = DataPaths::At(root);
  if (!fs::is_directory(root)) {
    throw StoreError("data directory " + root.string() + " does not exist");
  }
  if (!fs::exists(store.paths_.config)) {
    throw StoreError("missing " + store.paths_.config.string() +
                     " (run ingest or synth first)");
  }
  store.settings_ = ReadKeyValueFile(store.paths_.config);
  auto as_of = store.settings_.find(kCorpusAsOfKey);
  if (as_of == store.settings_.end()) {
    throw StoreError(fmt::format("{} has no {} key", store.paths_.config.string(),
                                 kCorpusAsOfKey));
  }
  Instant corpus_as_of;
  try {
    corpus_as_of = ParseInstant(as_of->second);
  } catch (const std::invalid_argument& e) {
    throw StoreError(fmt::format("{}: {}", kCorpusAsOfKey, e.what()));
  }
  store.config_ = ApplyConfig(Config{}, store.settings_);
  store.corpus_ = LoadCorpus(CorpusPaths::InDirectory(store.paths_.corpus_dir), corpus_as_of);

  ReadLines(store.paths_.batches, [&](const Json& obj, std::size_t) {
    Batch b = BatchFromJson(obj);
    store.ledger_.RecordBatch(b.project_id, b.batch_id);
    store.batch_index_.emplace(b.batch_id, store.batches_.size());
    store.batches_.push_back(std::move(b));
  });
  ReadLines(store.paths_.ledger, [&](const Json& obj, std::size_t) {
    LedgerEntry e = LedgerEntryFromJson(obj);
    if (!store.batch_index_.contains(e.batch_id)) {
      throw RecordError("batch_id", "ledger entry refers to unknown batch " + e.batch_id);
    }
    store.ledger_.Append(std::move(e));
  });
  ReadLines(store.paths_.feedback, [&](const Json& obj, std::size_t) {
    FeedbackRecord r = FeedbackFromJson(obj);
    store.decided_.insert(DecisionKey(r.batch_id, r.editor_id, r.algorithm));
    store.feedback_.push_back(std::move(r));
  });
  return store;
}

const Batch* DataStore::FindBatch(const std::string& batch_id) const {
  auto it = batch_index_.find(batch_id);
  return it == batch_index_.end() ? nullptr : &batches_[it->second];
}

std::vector<const Batch*> DataStore::BatchesOf(const std::string& project_id) const {
  std::vector<const Batch*> out;
  for (const auto& b : batches_) {
    if (b.project_id == project_id) out.push_back(&b);
  }
  return out;
}

bool DataStore::HasDecision(const std::string& batch_id, const std::string& editor_id,
                            Algorithm algorithm) const {
  return decided_.contains(DecisionKey(batch_id, editor_id, algorithm));
}

void DataStore::CommitBatches(std::vector<Batch> batches, RecommendationLedger ledger) {
  std::string batch_text;
  for (const auto& b : batches) batch_text += ToJsonLine(BatchToJson(b));
  std::string ledger_text;
  const auto& entries = ledger.entries();
  for (std::size_t i = ledger_.size(); i < entries.size(); ++i) {
    ledger_text += ToJsonLine(LedgerEntryToJson(entries[i]));
  }
  AtomicAppend({{paths_.batches, batch_text}, {paths_.ledger, ledger_text}});
  for (auto& b : batches) {
    batch_index_.emplace(b.batch_id, batches_.size());
    batches_.push_back(std::move(b));
  }
  ledger_ = std::move(ledger);
}

void DataStore::CommitFeedback(const std::vector<FeedbackRecord>& records) {
  using Kind = DecisionError::Kind;
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    const Batch* batch = FindBatch(r.batch_id);
    if (!batch) throw DecisionError(Kind::kUnknownBatch, "batch_id", "unknown batch " + r.batch_id);
    if (r.project_id != batch->project_id) {
      throw DecisionError(Kind::kInvalid, "project_id",
                          fmt::format("batch {} belongs to project {}", r.batch_id,
                                      batch->project_id));
    }
    if (r.rating && (*r.rating < 1 || *r.rating > 5)) {
      throw DecisionError(Kind::kInvalid, "rating",
                          fmt::format("rating must be between 1 and 5 (got {})", *r.rating));
    }
    const LedgerEntry* issued = ledger_.Find(r.batch_id, r.editor_id, r.algorithm);
    if (!issued) {
      throw DecisionError(Kind::kNotIssued, "editor_id",
                          fmt::format("{} was not recommended by {} in batch {}", r.editor_id,
                                      AlgorithmName(r.algorithm), r.batch_id));
    }
    if (issued->pool != r.pool) {
      throw DecisionError(Kind::kInvalid, "pool",
                          fmt::format("{} was recommended in pool {}", r.editor_id,
                                      TierName(issued->pool)));
    }
    const std::string key = DecisionKey(r.batch_id, r.editor_id, r.algorithm);
    if (decided_.contains(key) || !seen.insert(key).second) {
      throw DecisionError(Kind::kDuplicate, "editor_id",
                          fmt::format("a decision for {} by {} in batch {} already exists",
                                      r.editor_id, AlgorithmName(r.algorithm), r.batch_id));
    }
  }
  std::string text;
  for (const auto& r : records) text += ToJsonLine(FeedbackToJson(r));
  AtomicAppend({{paths_.feedback, text}});
  for (const auto& r : records) {
    decided_.insert(DecisionKey(r.batch_id, r.editor_id, r.algorithm));
    feedback_.push_back(r);
  }
}

}  // namespace wikirec

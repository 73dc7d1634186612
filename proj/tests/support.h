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

#ifndef WIKIREC_TESTS_SUPPORT_H_
#define WIKIREC_TESTS_SUPPORT_H_

// Fixture builders and brute-force oracles shared by the tests. The oracles
// work on raw string-keyed records with nested loops and share no code with
// the library's indexes.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wikirec/config.h"
#include "wikirec/corpus.h"
#include "wikirec/profiling.h"
#include "wikirec/recommenders.h"

namespace wikirec::testing {

Instant T(const std::string& text);

class CorpusBuilder {
 public:
  explicit CorpusBuilder(Instant as_of = T("2020-01-01T00:00:00Z")) : as_of_(as_of) {}

  CorpusBuilder& Editor(const std::string& id, Instant registered);
  CorpusBuilder& Article(const std::string& id, std::vector<std::string> categories,
                         std::vector<std::string> in_scope_of = {});
  CorpusBuilder& Project(const std::string& id, std::vector<std::string> members,
                         std::vector<std::string> organizers = {});
  CorpusBuilder& Edit(const std::string& editor, const std::string& article, Instant ts,
                      bool reverted = false);
  // n edits one hour apart starting at `first`.
  CorpusBuilder& Edits(const std::string& editor, const std::string& article, int n,
                       Instant first, int reverted = 0);
  CorpusBuilder& Interaction(const std::string& source, const std::string& target,
                             Instant ts, InteractionKind kind = InteractionKind::kTalkMessage);

  CorpusRecords& records() { return records_; }
  Instant as_of() const { return as_of_; }
  Corpus Build() const;

 private:
  Instant as_of_;
  CorpusRecords records_;
};

// Fuzz corpus built directly as records: few articles and coarse timestamps
// so that ties, repeated edits and threshold cases are common.
CorpusRecords RandomRecords(std::uint64_t seed, int max_editors = 60, int max_projects = 6);

// Unique temporary directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string ReadFile(const std::filesystem::path& path);

namespace oracle {

// Everything below recomputes from `records` by exhaustive scans.
std::uint64_t EditsBefore(const CorpusRecords& r, const std::string& editor, Instant as_of);
ExperienceTier Tier(const CorpusRecords& r, const std::string& editor, Instant as_of,
                    const Config& config);
double Quality(const CorpusRecords& r, const std::string& editor, Instant as_of,
               const Config& config);
std::map<std::string, std::uint64_t> CategoryVector(const CorpusRecords& r,
                                                    const std::string& editor, Instant as_of);
std::map<std::string, std::uint64_t> ProjectProfile(const CorpusRecords& r,
                                                    const std::string& project);
bool IsMember(const CorpusRecords& r, const std::string& editor, const std::string& project);
bool Eligible(const CorpusRecords& r, const std::string& editor, const std::string& project,
              Instant as_of, const Config& config);
std::uint64_t RuleScore(const CorpusRecords& r, const std::string& editor,
                        const std::string& project, Instant as_of, const Config& config);
double Cosine(const std::map<std::string, std::uint64_t>& a,
              const std::map<std::string, std::uint64_t>& b);
double CategoryScore(const CorpusRecords& r, const std::string& editor,
                     const std::string& project, Instant as_of);
std::uint64_t InteractionCount(const CorpusRecords& r, const std::string& a,
                               const std::string& b, Instant as_of, const Config& config);
double BondsScore(const CorpusRecords& r, const std::string& editor,
                  const std::string& project, Instant as_of, const Config& config);
double CoEditScore(const CorpusRecords& r, const std::string& editor,
                   const std::string& project, Instant as_of, const Config& config);
double Score(Algorithm algorithm, const CorpusRecords& r, const std::string& editor,
             const std::string& project, Instant as_of, const Config& config);

struct Ranked {
  std::string editor_id;
  double score;
};

// Every eligible editor of the pool with a positive score, score descending
// then editor_id ascending (untruncated).
std::vector<Ranked> Ranking(Algorithm algorithm, const CorpusRecords& r,
                            const std::string& project, ExperienceTier pool,
                            Instant as_of, const Config& config);

// Precomputed oracle scores for one (corpus, as_of): builds per-editor edit
// lists by scanning once so that many scorer calls stay affordable.
class Context {
 public:
  Context(const CorpusRecords& records, Instant as_of, const Config& config);

  bool Eligible(const std::string& editor, const std::string& project) const;
  ExperienceTier Tier(const std::string& editor) const;
  double Score(Algorithm algorithm, const std::string& editor,
               const std::string& project) const;
  std::vector<Ranked> Ranking(Algorithm algorithm, const std::string& project,
                              ExperienceTier pool) const;

 private:
  struct EditorData {
    Instant registered;
    std::uint64_t total = 0;
    std::uint64_t reverted = 0;
    std::map<std::string, std::uint64_t> articles;  // all edits before as_of
    std::vector<std::string> window_articles;       // rule window
  };
  const CorpusRecords& records_;
  Instant as_of_;
  Config config_;
  std::map<std::string, EditorData> editors_;
  std::map<std::string, const ArticleRecord*> articles_;
  std::map<std::string, const ProjectRecord*> projects_;
  std::map<std::pair<std::string, std::string>, std::uint64_t> pair_counts_;
};

}  // namespace oracle

// Compares a computed ranking with the oracle's untruncated ranking, allowing
// editors whose oracle scores are within `tol` of each other to trade places.
// Returns an empty string on success, else a description of the mismatch.
std::string CompareRanking(const std::vector<std::pair<std::string, double>>& got,
                           const std::vector<oracle::Ranked>& expected, std::size_t n,
                           double tol = 1e-9);

}  // namespace wikirec::testing

#endif  // WIKIREC_TESTS_SUPPORT_H_

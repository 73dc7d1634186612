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

#ifndef WIKIREC_RANKING_H_
#define WIKIREC_RANKING_H_

// Batch-scale scoring. A ProfileSnapshot aggregates every editor's history at
// one as_of; a ProjectScorer then scores all candidates for one project in
// time proportional to their own history. Both have OpenMP loops that can be
// switched off with Execution::kSerial.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wikirec/config.h"
#include "wikirec/corpus.h"
#include "wikirec/profiling.h"
#include "wikirec/recommenders.h"

namespace wikirec {

enum class Execution { kSerial, kParallel };

struct EditorState {
  bool registered = false;  // registered_at < as_of
  ExperienceTier tier = ExperienceTier::kBrandNew;
  std::uint32_t total_edits = 0;
  std::uint32_t reverted_edits = 0;
  double quality_score = 0.0;
  SparseCounts articles;         // edits before as_of, per article
  std::uint64_t article_norm2 = 0;
  SparseCounts window_articles;  // edits in the rule window, per article
  SparseCounts categories;
};

class ProfileSnapshot {
 public:
  static ProfileSnapshot Build(const Corpus& corpus, Instant as_of,
                               const Config& config,
                               Execution execution = Execution::kParallel);

  Instant as_of() const { return as_of_; }
  const EditorState& state(EditorIndex e) const { return states_[e]; }
  std::size_t size() const { return states_.size(); }
  const InteractionGraph& graph() const { return graph_; }

 private:
  Instant as_of_{};
  std::vector<EditorState> states_;
  InteractionGraph graph_;
};

// Scores the candidates of one project against a snapshot.
class ProjectScorer {
 public:
  ProjectScorer(const Corpus& corpus, const ProfileSnapshot& snapshot,
                ProjectIndex project, const Config& config);

  ProjectIndex project() const { return project_; }
  const Corpus& corpus() const { return corpus_; }
  const ProfileSnapshot& snapshot() const { return snapshot_; }

  // Editors passing the eligibility gate, ascending.
  const std::vector<EditorIndex>& eligible() const { return eligible_; }
  bool IsEligible(EditorIndex editor) const;

  double Score(Algorithm algorithm, EditorIndex editor) const;

  // Scores of every eligible editor, aligned with eligible().
  std::vector<double> ScoreEligible(Algorithm algorithm,
                                    Execution execution = Execution::kParallel) const;

  // Evidence sentence for an editor's score under `algorithm`.
  std::string Explain(Algorithm algorithm, EditorIndex editor) const;

  // Edits in the rule window to this project's scope (no floor applied).
  std::uint32_t RecentInScopeEdits(EditorIndex editor) const;

 private:
  double ScoreCoEdit(EditorIndex editor, std::vector<std::uint64_t>& dots) const;
  std::vector<std::pair<double, EditorIndex>> MemberSimilarities(EditorIndex editor) const;

  const Corpus& corpus_;
  const ProfileSnapshot& snapshot_;
  ProjectIndex project_;
  const Config& config_;

  std::vector<EditorIndex> eligible_;
  std::vector<char> in_scope_;   // per article
  std::vector<char> is_member_;  // per editor
  SparseCounts profile_;
  std::uint64_t profile_norm2_ = 0;

  // Member article postings: for article a, entries
  // [posting_offsets_[a], posting_offsets_[a+1]) hold (member slot, count).
  std::vector<EditorIndex> members_;
  std::vector<std::uint64_t> member_norm2_;
  std::vector<std::uint32_t> posting_offsets_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> postings_;
};

// The n best eligible editors of `pool` with score > 0, by score descending
// then editor_id ascending. Editors for which `exclude` returns true are
// skipped before truncation.
std::vector<ScoredCandidate> RankCandidates(
    const ProjectScorer& scorer, ExperienceTier pool, Algorithm algorithm,
    std::size_t n, Execution execution = Execution::kParallel,
    const std::function<bool(EditorIndex)>& exclude = {});

// Same ranking over precomputed ScoreEligible() output.
std::vector<ScoredCandidate> RankScored(const ProjectScorer& scorer,
                                        const std::vector<double>& scores,
                                        ExperienceTier pool, Algorithm algorithm,
                                        std::size_t n,
                                        const std::function<bool(EditorIndex)>& exclude);

// Convenience form that builds its own snapshot.
std::vector<ScoredCandidate> RankCandidates(ProjectIndex project, ExperienceTier pool,
                                            Algorithm algorithm, const Corpus& corpus,
                                            Instant as_of, const Config& config,
                                            std::size_t n);

// Orders (score, editor) pairs and keeps the top n with positive score.
std::vector<std::pair<double, EditorIndex>> TopPositive(
    std::vector<std::pair<double, EditorIndex>> scored, std::size_t n);

}  // namespace wikirec

#endif  // WIKIREC_RANKING_H_

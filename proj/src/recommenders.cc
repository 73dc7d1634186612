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

#include "wikirec/recommenders.h"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace wikirec {
namespace {

SparseCounts ArticleCounts(EditorIndex editor, const Corpus& corpus, Instant as_of) {
  std::map<std::uint32_t, std::uint32_t> counts;
  const auto edits = corpus.edits();
  for (std::uint32_t i : EditsBefore(editor, corpus, as_of)) ++counts[edits[i].article];
  return SparseCounts(counts.begin(), counts.end());
}

}  // namespace

std::string_view AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kRuleBased:
      return "rule_based";
    case Algorithm::kCategoryBased:
      return "category_based";
    case Algorithm::kBondsBased:
      return "bonds_based";
    case Algorithm::kCoEditBased:
      return "coedit_based";
  }
  return "rule_based";
}

std::optional<Algorithm> ParseAlgorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (AlgorithmName(a) == name) return a;
  }
  return std::nullopt;
}

double CategoryCosine(const SparseCounts& editor_vector, const SparseCounts& profile) {
  std::uint32_t g = 0;
  for (const auto& [c, w] : editor_vector) g = std::gcd(g, w);
  if (g == 0) return 0.0;
  std::uint64_t dot = 0;
  std::uint64_t norm2 = 0;
  auto j = profile.begin();
  for (const auto& [c, w] : editor_vector) {
    const std::uint64_t reduced = w / g;
    norm2 += reduced * reduced;
    while (j != profile.end() && j->first < c) ++j;
    if (j != profile.end() && j->first == c) dot += reduced * j->second;
  }
  return IntegerCosine(dot, norm2, SquaredNorm(profile));
}

bool Eligible(EditorIndex editor, ProjectIndex project, const Corpus& corpus,
              Instant as_of, const Config& config) {
  if (corpus.IsMember(editor, project)) return false;
  if (corpus.editor(editor).registered_at >= as_of) return false;
  if (TierOf(editor, corpus, as_of, config) == ExperienceTier::kHighlyExperienced) {
    return false;
  }
  return QualityScore(editor, corpus, as_of, config) < config.quality_cutoff;
}

std::uint64_t ScoreRuleBased(EditorIndex editor, ProjectIndex project,
                             const Corpus& corpus, Instant as_of, const Config& config) {
  const Instant start = as_of - Days(config.rule_window_days);
  const auto edits = corpus.edits();
  std::uint64_t count = 0;
  for (std::uint32_t i : EditsBefore(editor, corpus, as_of)) {
    if (edits[i].timestamp < start) continue;
    const auto& scope = corpus.article(edits[i].article).in_scope_of;
    if (std::binary_search(scope.begin(), scope.end(), project)) ++count;
  }
  return count < static_cast<std::uint64_t>(config.rule_min_edits) ? 0 : count;
}

double ScoreCategoryBased(EditorIndex editor, ProjectIndex project,
                          const Corpus& corpus, Instant as_of) {
  return CategoryCosine(CategoryVector(editor, corpus, as_of),
                        ProjectCategoryProfile(project, corpus));
}

double ScoreBondsBased(EditorIndex editor, ProjectIndex project, const Corpus& corpus,
                       Instant as_of, const Config& config) {
  const Instant start = as_of - Days(config.bonds_window_days);
  std::map<EditorIndex, std::uint32_t> counts;
  const auto interactions = corpus.interactions();
  for (std::uint32_t i : corpus.InteractionsOf(editor)) {
    const auto& x = interactions[i];
    if (x.timestamp < start || x.timestamp >= as_of) continue;
    if (!config.bonds_kinds.Contains(x.kind)) continue;
    const EditorIndex other = x.source == editor ? x.target : x.source;
    if (corpus.IsMember(other, project)) ++counts[other];
  }
  double total = 0.0;
  for (const auto& [member, n] : counts) total += std::log(1.0 + n);
  return total;
}

double ScoreCoEditBased(EditorIndex editor, ProjectIndex project,
                        const Corpus& corpus, Instant as_of, const Config& config) {
  const auto& members = corpus.project(project).members;
  if (members.empty()) return 0.0;
  const SparseCounts mine = ArticleCounts(editor, corpus, as_of);
  if (mine.empty()) return 0.0;
  const std::uint64_t my_norm2 = SquaredNorm(mine);
  std::vector<double> sims;
  sims.reserve(members.size());
  for (EditorIndex m : members) {
    const SparseCounts theirs = ArticleCounts(m, corpus, as_of);
    sims.push_back(IntegerCosine(Dot(mine, theirs), my_norm2, SquaredNorm(theirs)));
  }
  const std::size_t k =
      std::min<std::size_t>(static_cast<std::size_t>(config.coedit_top_k), sims.size());
  std::partial_sort(sims.begin(), sims.begin() + k, sims.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += sims[i];
  return sum / static_cast<double>(k);
}

double ScorePair(Algorithm algorithm, EditorIndex editor, ProjectIndex project,
                 const Corpus& corpus, Instant as_of, const Config& config) {
  switch (algorithm) {
    case Algorithm::kRuleBased:
      return static_cast<double>(ScoreRuleBased(editor, project, corpus, as_of, config));
    case Algorithm::kCategoryBased:
      return ScoreCategoryBased(editor, project, corpus, as_of);
    case Algorithm::kBondsBased:
      return ScoreBondsBased(editor, project, corpus, as_of, config);
    case Algorithm::kCoEditBased:
      return ScoreCoEditBased(editor, project, corpus, as_of, config);
  }
  return 0.0;
}

namespace reference {

std::vector<RankedScore> RankCandidates(ProjectIndex project, ExperienceTier pool,
                                        Algorithm algorithm, const Corpus& corpus,
                                        Instant as_of, const Config& config,
                                        std::size_t n) {
  if (pool == ExperienceTier::kHighlyExperienced) {
    throw std::invalid_argument("highly experienced editors are not a candidate pool");
  }
  std::vector<std::pair<double, EditorIndex>> scored;
  for (EditorIndex e = 0; e < corpus.editors().size(); ++e) {
    if (!Eligible(e, project, corpus, as_of, config)) continue;
    if (TierOf(e, corpus, as_of, config) != pool) continue;
    const double s = ScorePair(algorithm, e, project, corpus, as_of, config);
    if (s > 0.0) scored.emplace_back(s, e);
  }
  // Editor indices follow editor_id order, so index order is id order.
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<RankedScore> out;
  for (std::size_t i = 0; i < scored.size() && i < n; ++i) {
    out.push_back({corpus.editor(scored[i].second).id, scored[i].first});
  }
  return out;
}

}  // namespace reference

}  // namespace wikirec

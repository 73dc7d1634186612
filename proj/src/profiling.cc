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

#include "wikirec/profiling.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wikirec {

std::string_view TierName(ExperienceTier tier) {
  switch (tier) {
    case ExperienceTier::kBrandNew:
      return "brand_new";
    case ExperienceTier::kModeratelyExperienced:
      return "moderately_experienced";
    case ExperienceTier::kHighlyExperienced:
      return "highly_experienced";
  }
  return "brand_new";
}

std::optional<ExperienceTier> ParseTier(std::string_view name) {
  if (name == "brand_new") return ExperienceTier::kBrandNew;
  if (name == "moderately_experienced") return ExperienceTier::kModeratelyExperienced;
  if (name == "highly_experienced") return ExperienceTier::kHighlyExperienced;
  return std::nullopt;
}

std::uint64_t SquaredNorm(const SparseCounts& v) {
  std::uint64_t s = 0;
  for (const auto& [k, w] : v) s += std::uint64_t{w} * w;
  return s;
}

std::uint64_t Dot(const SparseCounts& a, const SparseCounts& b) {
  std::uint64_t s = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      s += std::uint64_t{i->second} * j->second;
      ++i;
      ++j;
    }
  }
  return s;
}

ExperienceTier ClassifyTier(std::uint64_t total_edits, Instant registered_at,
                            Instant as_of, const Config& config) {
  if (total_edits > static_cast<std::uint64_t>(config.highly_experienced_min_edits)) {
    return ExperienceTier::kHighlyExperienced;
  }
  const bool recent = as_of - registered_at <= Days(config.brand_new_recent_days);
  if (total_edits < static_cast<std::uint64_t>(config.brand_new_max_edits) || recent) {
    return ExperienceTier::kBrandNew;
  }
  return ExperienceTier::kModeratelyExperienced;
}

std::span<const std::uint32_t> EditsBefore(EditorIndex editor, const Corpus& corpus,
                                           Instant as_of) {
  const auto all = corpus.EditsOf(editor);
  const auto edits = corpus.edits();
  auto end = std::partition_point(all.begin(), all.end(), [&](std::uint32_t i) {
    return edits[i].timestamp < as_of;
  });
  return all.first(static_cast<std::size_t>(end - all.begin()));
}

ExperienceTier TierOf(EditorIndex editor, const Corpus& corpus, Instant as_of,
                      const Config& config) {
  return ClassifyTier(EditsBefore(editor, corpus, as_of).size(),
                      corpus.editor(editor).registered_at, as_of, config);
}

double QualityScore(EditorIndex editor, const Corpus& corpus, Instant as_of,
                    const Config& config) {
  const auto before = EditsBefore(editor, corpus, as_of);
  if (before.size() < static_cast<std::size_t>(config.quality_evidence_floor) ||
      before.empty()) {
    return 0.0;
  }
  const auto edits = corpus.edits();
  const auto reverted = std::count_if(before.begin(), before.end(),
                                      [&](std::uint32_t i) { return edits[i].reverted; });
  return static_cast<double>(reverted) / static_cast<double>(before.size());
}

SparseCounts CategoryVector(EditorIndex editor, const Corpus& corpus, Instant as_of) {
  std::map<std::uint32_t, std::uint32_t> weights;
  const auto edits = corpus.edits();
  for (std::uint32_t i : EditsBefore(editor, corpus, as_of)) {
    for (CategoryIndex c : corpus.article(edits[i].article).categories) ++weights[c];
  }
  return SparseCounts(weights.begin(), weights.end());
}

SparseCounts ProjectCategoryProfile(ProjectIndex project, const Corpus& corpus) {
  std::map<std::uint32_t, std::uint32_t> weights;
  for (ArticleIndex a : corpus.project(project).scope) {
    for (CategoryIndex c : corpus.article(a).categories) ++weights[c];
  }
  return SparseCounts(weights.begin(), weights.end());
}

EditorProfile ProfileEditor(EditorIndex editor, const Corpus& corpus, Instant as_of,
                            const Config& config) {
  EditorProfile p;
  p.editor = editor;
  const auto before = EditsBefore(editor, corpus, as_of);
  const auto edits = corpus.edits();
  p.total_edits = before.size();
  const Instant window_start = as_of - Days(config.rule_window_days);
  for (std::uint32_t i : before) {
    const auto& e = edits[i];
    if (e.reverted) ++p.reverted_edits;
    if (e.timestamp >= window_start) {
      for (ProjectIndex proj : corpus.article(e.article).in_scope_of) {
        ++p.recent_in_scope_edits[proj];
      }
    }
  }
  p.revert_rate = p.total_edits > 0 ? static_cast<double>(p.reverted_edits) /
                                          static_cast<double>(p.total_edits)
                                    : 0.0;
  p.quality_score = QualityScore(editor, corpus, as_of, config);
  p.tier = TierOf(editor, corpus, as_of, config);
  p.category_vector = CategoryVector(editor, corpus, as_of);
  return p;
}

std::span<const InteractionGraph::Edge> InteractionGraph::Neighbors(
    EditorIndex editor) const {
  if (editor + 1 >= offsets_.size()) return {};
  return std::span<const Edge>(edges_).subspan(offsets_[editor],
                                               offsets_[editor + 1] - offsets_[editor]);
}

std::uint32_t InteractionGraph::Count(EditorIndex a, EditorIndex b) const {
  const auto n = Neighbors(a);
  auto it = std::lower_bound(n.begin(), n.end(), b, [](const Edge& e, EditorIndex v) {
    return e.neighbor < v;
  });
  return (it != n.end() && it->neighbor == b) ? it->count : 0;
}

double InteractionGraph::Weight(EditorIndex a, EditorIndex b) const {
  const auto n = Neighbors(a);
  auto it = std::lower_bound(n.begin(), n.end(), b, [](const Edge& e, EditorIndex v) {
    return e.neighbor < v;
  });
  return (it != n.end() && it->neighbor == b) ? it->weight : 0.0;
}

InteractionGraph BuildInteractionGraph(const Corpus& corpus, Instant as_of,
                                       std::int64_t window_days,
                                       InteractionKindSet kinds) {
  if (window_days < 1) throw std::invalid_argument("window_days must be >= 1");
  const auto all = corpus.interactions();
  const Instant start = as_of - Days(window_days);
  auto lo = std::partition_point(all.begin(), all.end(),
                                 [&](const auto& x) { return x.timestamp < start; });
  auto hi = std::partition_point(lo, all.end(),
                                 [&](const auto& x) { return x.timestamp < as_of; });

  // Directed copies of every in-window interaction, then run-length counted.
  std::vector<std::pair<EditorIndex, EditorIndex>> pairs;
  pairs.reserve(2 * static_cast<std::size_t>(hi - lo));
  for (auto it = lo; it != hi; ++it) {
    if (!kinds.Contains(it->kind)) continue;
    pairs.emplace_back(it->source, it->target);
    pairs.emplace_back(it->target, it->source);
  }
  std::sort(pairs.begin(), pairs.end());

  InteractionGraph g;
  const std::size_t n = corpus.editors().size();
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
    const auto count = static_cast<std::uint32_t>(j - i);
    g.edges_.push_back({pairs[i].second, count, std::log(1.0 + count)});
    ++g.offsets_[pairs[i].first + 1];
    i = j;
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  return g;
}

}  // namespace wikirec

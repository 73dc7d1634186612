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

#include "wikirec/ranking.h"

#include <algorithm>
#include <functional>

#include <fmt/format.h>

namespace wikirec {
namespace {

// Sorts keys and collapses runs into (key, count) pairs.
SparseCounts RunLength(std::vector<std::uint32_t>& keys) {
  std::sort(keys.begin(), keys.end());
  SparseCounts out;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    out.emplace_back(keys[i], static_cast<std::uint32_t>(j - i));
    i = j;
  }
  return out;
}

bool Better(const std::pair<double, EditorIndex>& a,
            const std::pair<double, EditorIndex>& b) {
  return a.first != b.first ? a.first > b.first : a.second < b.second;
}

}  // namespace

ProfileSnapshot ProfileSnapshot::Build(const Corpus& corpus, Instant as_of,
                                       const Config& config, Execution execution) {
  ProfileSnapshot s;
  s.as_of_ = as_of;
  const auto n = static_cast<std::int64_t>(corpus.editors().size());
  s.states_.resize(static_cast<std::size_t>(n));
  const Instant window_start = as_of - Days(config.rule_window_days);
  const auto edits = corpus.edits();

#pragma omp parallel if (execution == Execution::kParallel)
  {
    std::vector<std::uint32_t> articles;
    std::vector<std::uint32_t> window;
    std::vector<std::uint32_t> categories;
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto editor = static_cast<EditorIndex>(i);
      EditorState& st = s.states_[static_cast<std::size_t>(i)];
      const auto before = EditsBefore(editor, corpus, as_of);
      articles.clear();
      window.clear();
      categories.clear();
      for (std::uint32_t idx : before) {
        const auto& e = edits[idx];
        if (e.reverted) ++st.reverted_edits;
        articles.push_back(e.article);
        if (e.timestamp >= window_start) window.push_back(e.article);
        const auto& cats = corpus.article(e.article).categories;
        categories.insert(categories.end(), cats.begin(), cats.end());
      }
      st.total_edits = static_cast<std::uint32_t>(before.size());
      st.registered = corpus.editor(editor).registered_at < as_of;
      st.tier = ClassifyTier(st.total_edits, corpus.editor(editor).registered_at,
                             as_of, config);
      st.quality_score =
          (st.total_edits == 0 ||
           st.total_edits < static_cast<std::uint64_t>(config.quality_evidence_floor))
              ? 0.0
              : static_cast<double>(st.reverted_edits) /
                    static_cast<double>(st.total_edits);
      st.articles = RunLength(articles);
      st.article_norm2 = SquaredNorm(st.articles);
      st.window_articles = RunLength(window);
      st.categories = RunLength(categories);
    }
  }
  s.graph_ = BuildInteractionGraph(corpus, as_of, config.bonds_window_days,
                                   config.bonds_kinds);
  return s;
}

ProjectScorer::ProjectScorer(const Corpus& corpus, const ProfileSnapshot& snapshot,
                             ProjectIndex project, const Config& config)
    : corpus_(corpus), snapshot_(snapshot), project_(project), config_(config) {
  const auto& proj = corpus.project(project);
  in_scope_.assign(corpus.articles().size(), 0);
  for (ArticleIndex a : proj.scope) in_scope_[a] = 1;
  is_member_.assign(corpus.editors().size(), 0);
  for (EditorIndex m : proj.members) is_member_[m] = 1;
  profile_ = ProjectCategoryProfile(project, corpus);
  profile_norm2_ = SquaredNorm(profile_);

  members_ = proj.members;
  member_norm2_.reserve(members_.size());
  posting_offsets_.assign(corpus.articles().size() + 1, 0);
  for (EditorIndex m : members_) {
    member_norm2_.push_back(snapshot.state(m).article_norm2);
    for (const auto& [a, c] : snapshot.state(m).articles) ++posting_offsets_[a + 1];
  }
  for (std::size_t a = 0; a + 1 < posting_offsets_.size(); ++a) {
    posting_offsets_[a + 1] += posting_offsets_[a];
  }
  postings_.resize(posting_offsets_.back());
  std::vector<std::uint32_t> cursor(posting_offsets_.begin(), posting_offsets_.end() - 1);
  for (std::uint32_t slot = 0; slot < members_.size(); ++slot) {
    for (const auto& [a, c] : snapshot.state(members_[slot]).articles) {
      postings_[cursor[a]++] = {slot, c};
    }
  }

  for (EditorIndex e = 0; e < snapshot.size(); ++e) {
    if (IsEligible(e)) eligible_.push_back(e);
  }
}

bool ProjectScorer::IsEligible(EditorIndex e) const {
  const EditorState& st = snapshot_.state(e);
  return !is_member_[e] && st.registered &&
         st.tier != ExperienceTier::kHighlyExperienced &&
         st.quality_score < config_.quality_cutoff;
}

std::uint32_t ProjectScorer::RecentInScopeEdits(EditorIndex editor) const {
  std::uint32_t count = 0;
  for (const auto& [a, c] : snapshot_.state(editor).window_articles) {
    if (in_scope_[a]) count += c;
  }
  return count;
}

double ProjectScorer::ScoreCoEdit(EditorIndex editor,
                                  std::vector<std::uint64_t>& dots) const {
  const EditorState& st = snapshot_.state(editor);
  if (members_.empty() || st.articles.empty()) return 0.0;
  dots.assign(members_.size(), 0);
  for (const auto& [a, c] : st.articles) {
    for (std::uint32_t p = posting_offsets_[a]; p < posting_offsets_[a + 1]; ++p) {
      dots[postings_[p].first] += std::uint64_t{c} * postings_[p].second;
    }
  }
  thread_local std::vector<double> sims;
  sims.resize(members_.size());
  for (std::size_t s = 0; s < members_.size(); ++s) {
    sims[s] = IntegerCosine(dots[s], st.article_norm2, member_norm2_[s]);
  }
  const std::size_t k = std::min<std::size_t>(
      static_cast<std::size_t>(config_.coedit_top_k), sims.size());
  std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k),
                    sims.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += sims[i];
  return sum / static_cast<double>(k);
}

double ProjectScorer::Score(Algorithm algorithm, EditorIndex editor) const {
  const EditorState& st = snapshot_.state(editor);
  switch (algorithm) {
    case Algorithm::kRuleBased: {
      const std::uint32_t count = RecentInScopeEdits(editor);
      return count < static_cast<std::uint64_t>(config_.rule_min_edits)
                 ? 0.0
                 : static_cast<double>(count);
    }
    case Algorithm::kCategoryBased:
      return CategoryCosine(st.categories, profile_);
    case Algorithm::kBondsBased: {
      double total = 0.0;
      for (const auto& edge : snapshot_.graph().Neighbors(editor)) {
        if (is_member_[edge.neighbor]) total += edge.weight;
      }
      return total;
    }
    case Algorithm::kCoEditBased: {
      std::vector<std::uint64_t> dots;
      return ScoreCoEdit(editor, dots);
    }
  }
  return 0.0;
}

std::vector<double> ProjectScorer::ScoreEligible(Algorithm algorithm,
                                                 Execution execution) const {
  const auto n = static_cast<std::int64_t>(eligible_.size());
  std::vector<double> scores(eligible_.size(), 0.0);
  if (algorithm != Algorithm::kCoEditBased) {
#pragma omp parallel for schedule(static) if (execution == Execution::kParallel)
    for (std::int64_t i = 0; i < n; ++i) {
      scores[static_cast<std::size_t>(i)] =
          Score(algorithm, eligible_[static_cast<std::size_t>(i)]);
    }
    return scores;
  }
#pragma omp parallel if (execution == Execution::kParallel)
  {
    std::vector<std::uint64_t> dots;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < n; ++i) {
      scores[static_cast<std::size_t>(i)] =
          ScoreCoEdit(eligible_[static_cast<std::size_t>(i)], dots);
    }
  }
  return scores;
}

std::vector<std::pair<double, EditorIndex>> ProjectScorer::MemberSimilarities(
    EditorIndex editor) const {
  std::vector<std::pair<double, EditorIndex>> out;
  const EditorState& st = snapshot_.state(editor);
  std::vector<std::uint64_t> dots(members_.size(), 0);
  for (const auto& [a, c] : st.articles) {
    for (std::uint32_t p = posting_offsets_[a]; p < posting_offsets_[a + 1]; ++p) {
      dots[postings_[p].first] += std::uint64_t{c} * postings_[p].second;
    }
  }
  for (std::size_t s = 0; s < members_.size(); ++s) {
    out.emplace_back(IntegerCosine(dots[s], st.article_norm2, member_norm2_[s]),
                     members_[s]);
  }
  std::sort(out.begin(), out.end(), Better);
  return out;
}

std::string ProjectScorer::Explain(Algorithm algorithm, EditorIndex editor) const {
  const EditorState& st = snapshot_.state(editor);
  switch (algorithm) {
    case Algorithm::kRuleBased: {
      std::uint32_t count = 0;
      std::uint32_t distinct = 0;
      for (const auto& [a, c] : st.window_articles) {
        if (!in_scope_[a]) continue;
        count += c;
        ++distinct;
      }
      return fmt::format("{} edit{} to {} in-scope article{} in the last {} days",
                         count, count == 1 ? "" : "s", distinct,
                         distinct == 1 ? "" : "s", config_.rule_window_days);
    }
    case Algorithm::kCategoryBased: {
      std::vector<std::pair<std::uint32_t, CategoryIndex>> shared;
      auto j = profile_.begin();
      for (const auto& [c, w] : st.categories) {
        while (j != profile_.end() && j->first < c) ++j;
        if (j != profile_.end() && j->first == c) shared.emplace_back(w, c);
      }
      std::sort(shared.begin(), shared.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      std::string top;
      for (std::size_t i = 0; i < shared.size() && i < 3; ++i) {
        if (i) top += ", ";
        top += fmt::format("{} ({} edits)", corpus_.categories()[shared[i].second],
                           shared[i].first);
      }
      return fmt::format("Category similarity {:.3f} with the project topic; shared "
                         "categories: {}",
                         CategoryCosine(st.categories, profile_),
                         top.empty() ? "none" : top);
    }
    case Algorithm::kBondsBased: {
      std::vector<std::pair<std::uint32_t, EditorIndex>> links;
      for (const auto& edge : snapshot_.graph().Neighbors(editor)) {
        if (is_member_[edge.neighbor]) links.emplace_back(edge.count, edge.neighbor);
      }
      std::sort(links.begin(), links.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      std::string who;
      for (std::size_t i = 0; i < links.size() && i < 3; ++i) {
        if (i) who += ", ";
        who += fmt::format("{} ({} interaction{})", corpus_.editor(links[i].second).id,
                           links[i].first, links[i].first == 1 ? "" : "s");
      }
      return fmt::format("Interacted with {} project member{} in the last {} days: {}",
                         links.size(), links.size() == 1 ? "" : "s",
                         config_.bonds_window_days, who.empty() ? "none" : who);
    }
    case Algorithm::kCoEditBased: {
      const auto sims = MemberSimilarities(editor);
      const std::size_t k = std::min<std::size_t>(
          static_cast<std::size_t>(config_.coedit_top_k), sims.size());
      std::string who;
      for (std::size_t i = 0; i < sims.size() && i < 3 && sims[i].first > 0.0; ++i) {
        if (i) who += ", ";
        who += fmt::format("{} ({:.3f})", corpus_.editor(sims[i].second).id,
                           sims[i].first);
      }
      return fmt::format("Edit history resembles current members (mean of top {} "
                         "similarities {:.3f}); closest: {}",
                         k, Score(Algorithm::kCoEditBased, editor),
                         who.empty() ? "none" : who);
    }
  }
  return {};
}

std::vector<std::pair<double, EditorIndex>> TopPositive(
    std::vector<std::pair<double, EditorIndex>> scored, std::size_t n) {
  std::erase_if(scored, [](const auto& p) { return !(p.first > 0.0); });
  const std::size_t keep = std::min(n, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), Better);
  scored.resize(keep);
  return scored;
}

std::vector<ScoredCandidate> RankScored(const ProjectScorer& scorer,
                                        const std::vector<double>& scores,
                                        ExperienceTier pool, Algorithm algorithm,
                                        std::size_t n,
                                        const std::function<bool(EditorIndex)>& exclude) {
  const auto& eligible = scorer.eligible();
  std::vector<std::pair<double, EditorIndex>> pooled;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    const EditorIndex e = eligible[i];
    if (scorer.snapshot().state(e).tier != pool) continue;
    if (!(scores[i] > 0.0)) continue;
    if (exclude && exclude(e)) continue;
    pooled.emplace_back(scores[i], e);
  }
  std::vector<ScoredCandidate> out;
  for (const auto& [score, e] : TopPositive(std::move(pooled), n)) {
    out.push_back({scorer.corpus().editor(e).id, algorithm, score,
                   scorer.Explain(algorithm, e)});
  }
  return out;
}

std::vector<ScoredCandidate> RankCandidates(
    const ProjectScorer& scorer, ExperienceTier pool, Algorithm algorithm,
    std::size_t n, Execution execution,
    const std::function<bool(EditorIndex)>& exclude) {
  if (pool == ExperienceTier::kHighlyExperienced) {
    throw std::invalid_argument("highly experienced editors are not a candidate pool");
  }
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return RankScored(scorer, scorer.ScoreEligible(algorithm, execution), pool,
                    algorithm, n, exclude);
}

std::vector<ScoredCandidate> RankCandidates(ProjectIndex project, ExperienceTier pool,
                                            Algorithm algorithm, const Corpus& corpus,
                                            Instant as_of, const Config& config,
                                            std::size_t n) {
  const ProfileSnapshot snapshot = ProfileSnapshot::Build(corpus, as_of, config);
  const ProjectScorer scorer(corpus, snapshot, project, config);
  return RankCandidates(scorer, pool, algorithm, n);
}

}  // namespace wikirec

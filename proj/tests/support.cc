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

#include "support.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

#include <fmt/format.h>

namespace wikirec::testing {
namespace fs = std::filesystem;

Instant T(const std::string& text) { return ParseInstant(text); }

CorpusBuilder& CorpusBuilder::Editor(const std::string& id, Instant registered) {
  records_.editors.push_back({id, registered});
  return *this;
}

CorpusBuilder& CorpusBuilder::Article(const std::string& id,
                                      std::vector<std::string> categories,
                                      std::vector<std::string> in_scope_of) {
  records_.articles.push_back({id, std::move(categories), std::move(in_scope_of)});
  return *this;
}

CorpusBuilder& CorpusBuilder::Project(const std::string& id,
                                      std::vector<std::string> members,
                                      std::vector<std::string> organizers) {
  if (organizers.empty() && !members.empty()) organizers.push_back(members.front());
  records_.projects.push_back({id, "WikiProject " + id, std::move(members),
                               std::move(organizers)});
  return *this;
}

CorpusBuilder& CorpusBuilder::Edit(const std::string& editor, const std::string& article,
                                   Instant ts, bool reverted) {
  records_.edits.push_back({editor, article, ts, reverted});
  return *this;
}

CorpusBuilder& CorpusBuilder::Edits(const std::string& editor, const std::string& article,
                                    int n, Instant first, int reverted) {
  for (int i = 0; i < n; ++i) {
    Edit(editor, article, first + std::chrono::hours(i), i < reverted);
  }
  return *this;
}

CorpusBuilder& CorpusBuilder::Interaction(const std::string& source,
                                          const std::string& target, Instant ts,
                                          InteractionKind kind) {
  records_.interactions.push_back({source, target, ts, kind});
  return *this;
}

Corpus CorpusBuilder::Build() const { return Corpus::FromRecords(records_, as_of_); }

CorpusRecords RandomRecords(std::uint64_t seed, int max_editors, int max_projects) {
  std::mt19937_64 rng(seed);
  auto below = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  const Instant as_of = T("2020-01-01T00:00:00Z");
  const int editors = 2 + below(max_editors - 1);
  const int articles = 1 + below(12);
  const int categories = 1 + below(5);
  const int projects = 1 + below(max_projects);
  CorpusRecords r;
  for (int e = 0; e < editors; ++e) {
    // Registration from 400 days back to a day after as_of-1, in whole days,
    // so the 30-day recency rule and the registration gate both get exercised.
    r.editors.push_back({fmt::format("ed{:03d}", e), as_of - Days(below(400))});
  }
  for (int a = 0; a < articles; ++a) {
    ArticleRecord art{fmt::format("art{:02d}", a), {}, {}};
    for (int c = 0; c < categories; ++c) {
      if (below(3) == 0) art.categories.push_back(fmt::format("cat{}", c));
    }
    for (int p = 0; p < projects; ++p) {
      if (below(3) == 0) art.in_scope_of.push_back(fmt::format("proj{}", p));
    }
    r.articles.push_back(std::move(art));
  }
  for (int p = 0; p < projects; ++p) {
    ProjectRecord pr{fmt::format("proj{}", p), "Project", {}, {}};
    for (int e = 0; e < editors; ++e) {
      if (below(5) == 0) pr.members.push_back(r.editors[e].editor_id);
    }
    if (!pr.members.empty()) pr.organizers.push_back(pr.members[0]);
    r.projects.push_back(std::move(pr));
  }
  for (int e = 0; e < editors; ++e) {
    // A few editors get thousands of edits so that the top tier shows up.
    const int n = below(10) == 0 ? 2990 + below(20) : below(80);
    const double revert_p = below(4) == 0 ? 0.7 : 0.1;
    const bool favourite = below(2) == 0;
    const int fav = below(articles);
    for (int k = 0; k < n; ++k) {
      const int a = favourite && below(2) == 0 ? fav : below(articles);
      // Day resolution: many edits share a timestamp.
      const Instant ts = as_of - Days(below(120));
      const bool reverted = std::uniform_real_distribution<double>(0, 1)(rng) < revert_p;
      r.edits.push_back({r.editors[e].editor_id, r.articles[a].article_id, ts, reverted});
    }
  }
  const int interactions = below(editors * 4 + 1);
  constexpr InteractionKind kinds[] = {InteractionKind::kTalkMessage,
                                       InteractionKind::kCoEdit, InteractionKind::kThanks};
  for (int k = 0; k < interactions; ++k) {
    const int a = below(editors);
    int b = below(editors);
    if (a == b) b = (b + 1) % editors;
    r.interactions.push_back({r.editors[a].editor_id, r.editors[b].editor_id,
                              as_of - Days(below(400)), kinds[below(3)]});
  }
  return r;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          fmt::format("wikirec-test-{}-{}-{}", ::getpid(), counter++, rd());
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace oracle {
namespace {

const ArticleRecord* FindArticle(const CorpusRecords& r, const std::string& id) {
  for (const auto& a : r.articles) {
    if (a.article_id == id) return &a;
  }
  return nullptr;
}

const ProjectRecord* FindProject(const CorpusRecords& r, const std::string& id) {
  for (const auto& p : r.projects) {
    if (p.project_id == id) return &p;
  }
  return nullptr;
}

Instant Registered(const CorpusRecords& r, const std::string& editor) {
  for (const auto& e : r.editors) {
    if (e.editor_id == editor) return e.registered_at;
  }
  throw std::out_of_range("unknown editor " + editor);
}

bool Contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

ExperienceTier TierRule(std::uint64_t total, Instant registered, Instant as_of,
                        const Config& c) {
  if (total > static_cast<std::uint64_t>(c.highly_experienced_min_edits)) {
    return ExperienceTier::kHighlyExperienced;
  }
  if (total < static_cast<std::uint64_t>(c.brand_new_max_edits)) return ExperienceTier::kBrandNew;
  if (as_of - registered <= Days(c.brand_new_recent_days)) return ExperienceTier::kBrandNew;
  return ExperienceTier::kModeratelyExperienced;
}

double Mean(std::vector<double> sims, std::int64_t top_k) {
  if (sims.empty()) return 0.0;
  std::sort(sims.begin(), sims.end(), std::greater<>());
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(top_k), sims.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += sims[i];
  return sum / static_cast<double>(k);
}

std::vector<Ranked> SortRanking(std::vector<Ranked> out) {
  std::sort(out.begin(), out.end(), [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.editor_id < b.editor_id;
  });
  return out;
}

}  // namespace

std::uint64_t EditsBefore(const CorpusRecords& r, const std::string& editor, Instant as_of) {
  std::uint64_t n = 0;
  for (const auto& e : r.edits) {
    if (e.editor_id == editor && e.timestamp < as_of) ++n;
  }
  return n;
}

ExperienceTier Tier(const CorpusRecords& r, const std::string& editor, Instant as_of,
                    const Config& config) {
  return TierRule(EditsBefore(r, editor, as_of), Registered(r, editor), as_of, config);
}

double Quality(const CorpusRecords& r, const std::string& editor, Instant as_of,
               const Config& config) {
  std::uint64_t total = 0;
  std::uint64_t reverted = 0;
  for (const auto& e : r.edits) {
    if (e.editor_id != editor || e.timestamp >= as_of) continue;
    ++total;
    if (e.reverted) ++reverted;
  }
  if (total < static_cast<std::uint64_t>(config.quality_evidence_floor)) return 0.0;
  return static_cast<double>(reverted) / static_cast<double>(total);
}

std::map<std::string, std::uint64_t> CategoryVector(const CorpusRecords& r,
                                                    const std::string& editor,
                                                    Instant as_of) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& e : r.edits) {
    if (e.editor_id != editor || e.timestamp >= as_of) continue;
    for (const auto& c : FindArticle(r, e.article_id)->categories) ++out[c];
  }
  return out;
}

std::map<std::string, std::uint64_t> ProjectProfile(const CorpusRecords& r,
                                                    const std::string& project) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& a : r.articles) {
    if (!Contains(a.in_scope_of, project)) continue;
    std::set<std::string> unique(a.categories.begin(), a.categories.end());
    for (const auto& c : unique) ++out[c];
  }
  return out;
}

bool IsMember(const CorpusRecords& r, const std::string& editor,
              const std::string& project) {
  const ProjectRecord* p = FindProject(r, project);
  return p && Contains(p->members, editor);
}

bool Eligible(const CorpusRecords& r, const std::string& editor, const std::string& project,
              Instant as_of, const Config& config) {
  if (IsMember(r, editor, project)) return false;
  if (Registered(r, editor) >= as_of) return false;
  if (Tier(r, editor, as_of, config) == ExperienceTier::kHighlyExperienced) return false;
  return Quality(r, editor, as_of, config) < config.quality_cutoff;
}

std::uint64_t RuleScore(const CorpusRecords& r, const std::string& editor,
                        const std::string& project, Instant as_of, const Config& config) {
  std::uint64_t n = 0;
  for (const auto& e : r.edits) {
    if (e.editor_id != editor) continue;
    if (e.timestamp >= as_of || e.timestamp < as_of - Days(config.rule_window_days)) continue;
    if (Contains(FindArticle(r, e.article_id)->in_scope_of, project)) ++n;
  }
  return n < static_cast<std::uint64_t>(config.rule_min_edits) ? 0 : n;
}

double Cosine(const std::map<std::string, std::uint64_t>& a,
              const std::map<std::string, std::uint64_t>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (const auto& [k, v] : a) {
    na += static_cast<long double>(v) * v;
    auto it = b.find(k);
    if (it != b.end()) dot += static_cast<long double>(v) * it->second;
  }
  for (const auto& [k, v] : b) nb += static_cast<long double>(v) * v;
  if (na == 0 || nb == 0) return 0.0;
  return static_cast<double>(dot / std::sqrt(na * nb));
}

double CategoryScore(const CorpusRecords& r, const std::string& editor,
                     const std::string& project, Instant as_of) {
  return Cosine(CategoryVector(r, editor, as_of), ProjectProfile(r, project));
}

std::uint64_t InteractionCount(const CorpusRecords& r, const std::string& a,
                               const std::string& b, Instant as_of, const Config& config) {
  std::uint64_t n = 0;
  for (const auto& x : r.interactions) {
    const bool between = (x.source == a && x.target == b) || (x.source == b && x.target == a);
    if (!between || x.timestamp >= as_of) continue;
    if (x.timestamp < as_of - Days(config.bonds_window_days)) continue;
    if (!config.bonds_kinds.Contains(x.kind)) continue;
    ++n;
  }
  return n;
}

double BondsScore(const CorpusRecords& r, const std::string& editor,
                  const std::string& project, Instant as_of, const Config& config) {
  double total = 0.0;
  for (const auto& m : FindProject(r, project)->members) {
    if (m == editor) continue;
    total += std::log(1.0 + static_cast<double>(InteractionCount(r, editor, m, as_of, config)));
  }
  return total;
}

double CoEditScore(const CorpusRecords& r, const std::string& editor,
                   const std::string& project, Instant as_of, const Config& config) {
  auto articles_of = [&](const std::string& who) {
    std::map<std::string, std::uint64_t> v;
    for (const auto& e : r.edits) {
      if (e.editor_id == who && e.timestamp < as_of) ++v[e.article_id];
    }
    return v;
  };
  const auto mine = articles_of(editor);
  if (mine.empty()) return 0.0;
  std::vector<double> sims;
  for (const auto& m : FindProject(r, project)->members) {
    sims.push_back(Cosine(mine, articles_of(m)));
  }
  return Mean(sims, config.coedit_top_k);
}

double Score(Algorithm algorithm, const CorpusRecords& r, const std::string& editor,
             const std::string& project, Instant as_of, const Config& config) {
  switch (algorithm) {
    case Algorithm::kRuleBased:
      return static_cast<double>(RuleScore(r, editor, project, as_of, config));
    case Algorithm::kCategoryBased:
      return CategoryScore(r, editor, project, as_of);
    case Algorithm::kBondsBased:
      return BondsScore(r, editor, project, as_of, config);
    case Algorithm::kCoEditBased:
      return CoEditScore(r, editor, project, as_of, config);
  }
  return 0.0;
}

std::vector<Ranked> Ranking(Algorithm algorithm, const CorpusRecords& r,
                            const std::string& project, ExperienceTier pool,
                            Instant as_of, const Config& config) {
  std::vector<Ranked> out;
  for (const auto& e : r.editors) {
    if (!Eligible(r, e.editor_id, project, as_of, config)) continue;
    if (Tier(r, e.editor_id, as_of, config) != pool) continue;
    const double s = Score(algorithm, r, e.editor_id, project, as_of, config);
    if (s > 0.0) out.push_back({e.editor_id, s});
  }
  return SortRanking(std::move(out));
}

Context::Context(const CorpusRecords& records, Instant as_of, const Config& config)
    : records_(records), as_of_(as_of), config_(config) {
  for (const auto& e : records.editors) editors_[e.editor_id].registered = e.registered_at;
  for (const auto& a : records.articles) articles_[a.article_id] = &a;
  for (const auto& p : records.projects) projects_[p.project_id] = &p;
  for (const auto& e : records.edits) {
    if (e.timestamp >= as_of) continue;
    EditorData& d = editors_[e.editor_id];
    ++d.total;
    if (e.reverted) ++d.reverted;
    ++d.articles[e.article_id];
    if (e.timestamp >= as_of - Days(config.rule_window_days)) {
      d.window_articles.push_back(e.article_id);
    }
  }
  for (const auto& x : records.interactions) {
    if (x.timestamp >= as_of || x.timestamp < as_of - Days(config.bonds_window_days)) continue;
    if (!config.bonds_kinds.Contains(x.kind)) continue;
    ++pair_counts_[std::minmax(x.source, x.target)];
  }
}

ExperienceTier Context::Tier(const std::string& editor) const {
  const EditorData& d = editors_.at(editor);
  return TierRule(d.total, d.registered, as_of_, config_);
}

bool Context::Eligible(const std::string& editor, const std::string& project) const {
  if (Contains(projects_.at(project)->members, editor)) return false;
  const EditorData& d = editors_.at(editor);
  if (d.registered >= as_of_) return false;
  if (Tier(editor) == ExperienceTier::kHighlyExperienced) return false;
  const double q =
      d.total < static_cast<std::uint64_t>(config_.quality_evidence_floor)
          ? 0.0
          : static_cast<double>(d.reverted) / static_cast<double>(d.total);
  return q < config_.quality_cutoff;
}

double Context::Score(Algorithm algorithm, const std::string& editor,
                      const std::string& project) const {
  const EditorData& d = editors_.at(editor);
  const ProjectRecord& p = *projects_.at(project);
  switch (algorithm) {
    case Algorithm::kRuleBased: {
      std::uint64_t n = 0;
      for (const auto& a : d.window_articles) {
        if (Contains(articles_.at(a)->in_scope_of, project)) ++n;
      }
      return n < static_cast<std::uint64_t>(config_.rule_min_edits) ? 0.0
                                                                     : static_cast<double>(n);
    }
    case Algorithm::kCategoryBased: {
      std::map<std::string, std::uint64_t> v;
      for (const auto& [a, n] : d.articles) {
        for (const auto& c : articles_.at(a)->categories) v[c] += n;
      }
      return Cosine(v, ProjectProfile(records_, project));
    }
    case Algorithm::kBondsBased: {
      double total = 0.0;
      for (const auto& m : p.members) {
        auto it = pair_counts_.find(std::minmax(editor, m));
        if (it != pair_counts_.end()) total += std::log(1.0 + static_cast<double>(it->second));
      }
      return total;
    }
    case Algorithm::kCoEditBased: {
      if (d.articles.empty()) return 0.0;
      std::vector<double> sims;
      for (const auto& m : p.members) sims.push_back(Cosine(d.articles, editors_.at(m).articles));
      return Mean(sims, config_.coedit_top_k);
    }
  }
  return 0.0;
}

std::vector<Ranked> Context::Ranking(Algorithm algorithm, const std::string& project,
                                     ExperienceTier pool) const {
  std::vector<Ranked> out;
  for (const auto& [id, d] : editors_) {
    if (!Eligible(id, project) || Tier(id) != pool) continue;
    const double s = Score(algorithm, id, project);
    if (s > 0.0) out.push_back({id, s});
  }
  return SortRanking(std::move(out));
}

}  // namespace oracle

std::string CompareRanking(const std::vector<std::pair<std::string, double>>& got,
                           const std::vector<oracle::Ranked>& expected, std::size_t n,
                           double tol) {
  const std::size_t want = std::min(n, expected.size());
  if (got.size() != want) {
    return fmt::format("length {} but expected {}", got.size(), want);
  }
  std::map<std::string, double> oracle_score;
  for (const auto& e : expected) oracle_score[e.editor_id] = e.score;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < want; ++i) {
    const auto& [id, score] = got[i];
    if (!seen.insert(id).second) return fmt::format("{} listed twice", id);
    auto it = oracle_score.find(id);
    if (it == oracle_score.end()) return fmt::format("{} at rank {} is not a candidate", id, i + 1);
    if (std::fabs(it->second - score) > tol) {
      return fmt::format("{} scored {} but oracle says {}", id, score, it->second);
    }
    if (std::fabs(expected[i].score - score) > tol) {
      return fmt::format("rank {} holds score {} but oracle rank {} is {} ({})", i + 1, score,
                         i + 1, expected[i].score, expected[i].editor_id);
    }
    // Outside near-ties the order must be exact, including the id tie-break.
    const bool isolated =
        (i == 0 || std::fabs(expected[i - 1].score - expected[i].score) > tol) &&
        (i + 1 >= expected.size() || std::fabs(expected[i + 1].score - expected[i].score) > tol);
    if (isolated && id != expected[i].editor_id) {
      return fmt::format("rank {} is {} but oracle has {}", i + 1, id, expected[i].editor_id);
    }
    if (i > 0 && got[i - 1].second == score && !(got[i - 1].first < id)) {
      return fmt::format("equal scores at ranks {} and {} not in editor_id order", i, i + 1);
    }
    if (i > 0 && got[i - 1].second < score) {
      return fmt::format("scores increase between ranks {} and {}", i, i + 1);
    }
  }
  return {};
}

}  // namespace wikirec::testing

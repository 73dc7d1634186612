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

#include "wikirec/synthetic.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "wikirec/random.h"

namespace wikirec {
namespace {

enum class EditorClass { kVeteran, kModerate, kNewcomer };

struct SynthEditor {
  EditorClass kind;
  Instant registered;
  std::vector<std::uint32_t> favorites;
  double revert_propensity;
  double weekly_rate;
};

int Digits(std::int64_t n) {
  int d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

std::string MakeId(char prefix, std::int64_t i, int width) {
  return fmt::format("{}{:0{}d}", prefix, i, width);
}

// Uniform in [lo, hi) at second resolution; lo when the range is empty.
Instant RandomInstant(Rng& rng, Instant lo, Instant hi) {
  const auto span = (hi - lo).count();
  if (span <= 0) return lo;
  return lo + std::chrono::seconds(static_cast<std::int64_t>(rng.Below(span)));
}

double LogUniform(Rng& rng, double lo, double hi) {
  return std::exp(rng.Uniform(std::log(lo), std::log(hi)));
}

// Zipf(1) over [0, n) by inverse CDF.
class ZipfSampler {
 public:
  explicit ZipfSampler(std::size_t n) : cdf_(n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += 1.0 / static_cast<double>(k + 1);
      cdf_[k] = acc;
    }
  }
  std::uint32_t operator()(Rng& rng) const {
    const double u = rng.Uniform() * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::uint32_t>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

void Validate(const SyntheticParams& p) {
  auto check = [](std::int64_t v, const char* name) {
    if (v < 1) {
      throw std::invalid_argument(fmt::format("{} must be at least 1 (got {})", name, v));
    }
  };
  check(p.editor_count, "editor_count");
  check(p.project_count, "project_count");
  check(p.category_count, "category_count");
  check(p.weeks, "weeks");
  if (p.editor_count > 10'000'000 || p.project_count > 100'000 ||
      p.category_count > 100'000 || p.weeks > 520) {
    throw std::invalid_argument("synthetic parameters exceed supported bounds");
  }
}

}  // namespace

Instant SyntheticAsOf() { return ParseInstant("2019-01-01T00:00:00Z"); }

Instant SyntheticWindowStart(const SyntheticParams& params) {
  return SyntheticAsOf() - Days(7 * params.weeks);
}

Corpus GenerateSynthetic(const SyntheticParams& params) {
  Validate(params);
  Rng rng(params.seed);
  const Instant as_of = SyntheticAsOf();
  const Instant window_start = SyntheticWindowStart(params);
  const auto n_editors = static_cast<std::size_t>(params.editor_count);
  const auto n_categories = static_cast<std::size_t>(params.category_count);
  const std::size_t n_articles = std::max<std::size_t>(2 * n_editors, n_categories);
  const auto n_projects = static_cast<std::size_t>(params.project_count);

  CorpusRecords records;

  std::vector<std::string> category_labels(n_categories);
  const int cat_width = Digits(params.category_count);
  for (std::size_t c = 0; c < n_categories; ++c) {
    category_labels[c] = fmt::format("Topic {:0{}d}", c + 1, cat_width);
  }

  // Articles: a primary category plus up to two more.
  std::vector<std::vector<std::uint32_t>> article_categories(n_articles);
  std::vector<std::vector<std::uint32_t>> category_articles(n_categories);
  for (std::size_t a = 0; a < n_articles; ++a) {
    std::set<std::uint32_t> cats;
    cats.insert(static_cast<std::uint32_t>(rng.Below(n_categories)));
    const auto extra = rng.Below(3);
    for (std::uint64_t k = 0; k < extra; ++k) {
      cats.insert(static_cast<std::uint32_t>(rng.Below(n_categories)));
    }
    article_categories[a].assign(cats.begin(), cats.end());
    for (auto c : cats) category_articles[c].push_back(static_cast<std::uint32_t>(a));
  }

  // Project scope: most articles of the topic category, plus noise.
  std::vector<std::vector<std::uint32_t>> article_projects(n_articles);
  std::vector<std::uint32_t> project_topic(n_projects);
  for (std::size_t p = 0; p < n_projects; ++p) {
    const auto topic = static_cast<std::uint32_t>(p % n_categories);
    project_topic[p] = topic;
    bool any = false;
    for (auto a : category_articles[topic]) {
      if (rng.Bernoulli(0.9)) {
        article_projects[a].push_back(static_cast<std::uint32_t>(p));
        any = true;
      }
    }
    const std::size_t noise = n_articles / 100;
    for (std::size_t k = 0; k < noise || !any; ++k) {
      article_projects[rng.Below(n_articles)].push_back(static_cast<std::uint32_t>(p));
      any = true;
    }
  }

  // Editors.
  const ZipfSampler zipf(n_categories);
  std::vector<SynthEditor> editors(n_editors);
  std::vector<std::vector<std::uint32_t>> interested(n_categories);
  for (std::size_t i = 0; i < n_editors; ++i) {
    SynthEditor& e = editors[i];
    const double u = rng.Uniform();
    if (u < 0.01) {
      e.kind = EditorClass::kVeteran;
      e.registered = as_of - Days(rng.Between(3 * 365, 10 * 365));
      e.weekly_rate = rng.Uniform(8.0, 25.0);
    } else if (u < 0.31) {
      e.kind = EditorClass::kModerate;
      e.registered = window_start - Days(rng.Between(60, 3 * 365));
      e.weekly_rate = LogUniform(rng, 0.5, 12.0);
    } else {
      e.kind = EditorClass::kNewcomer;
      e.registered = RandomInstant(rng, window_start - Days(60), as_of - std::chrono::hours(1));
      e.weekly_rate = LogUniform(rng, 0.3, 10.0);
    }
    std::set<std::uint32_t> favs;
    const auto n_favs = 1 + rng.Below(3);
    for (std::uint64_t k = 0; k < n_favs; ++k) favs.insert(zipf(rng));
    e.favorites.assign(favs.begin(), favs.end());
    for (auto c : e.favorites) interested[c].push_back(static_cast<std::uint32_t>(i));
    e.revert_propensity = rng.Bernoulli(0.1) ? rng.Uniform(0.5, 0.7) : rng.Uniform(0.02, 0.08);
  }

  const int editor_width = Digits(params.editor_count);
  const int article_width = Digits(static_cast<std::int64_t>(n_articles));
  const int project_width = Digits(params.project_count);
  std::vector<std::string> editor_ids(n_editors);
  for (std::size_t i = 0; i < n_editors; ++i) {
    editor_ids[i] = MakeId('E', static_cast<std::int64_t>(i + 1), editor_width);
    records.editors.push_back({editor_ids[i], editors[i].registered});
  }
  std::vector<std::string> article_ids(n_articles);
  for (std::size_t a = 0; a < n_articles; ++a) {
    article_ids[a] = MakeId('A', static_cast<std::int64_t>(a + 1), article_width);
  }
  std::vector<std::string> project_ids(n_projects);
  for (std::size_t p = 0; p < n_projects; ++p) {
    project_ids[p] = MakeId('P', static_cast<std::int64_t>(p + 1), project_width);
  }

  for (std::size_t a = 0; a < n_articles; ++a) {
    ArticleRecord r;
    r.article_id = article_ids[a];
    for (auto c : article_categories[a]) r.categories.push_back(category_labels[c]);
    std::sort(article_projects[a].begin(), article_projects[a].end());
    article_projects[a].erase(
        std::unique(article_projects[a].begin(), article_projects[a].end()),
        article_projects[a].end());
    for (auto p : article_projects[a]) r.in_scope_of.push_back(project_ids[p]);
    records.articles.push_back(std::move(r));
  }

  // Edits.
  auto pick_article = [&](const SynthEditor& e) -> std::uint32_t {
    if (rng.Bernoulli(0.8)) {
      const auto c = e.favorites[rng.Below(e.favorites.size())];
      const auto& pool = category_articles[c];
      if (!pool.empty()) return pool[rng.Below(pool.size())];
    }
    return static_cast<std::uint32_t>(rng.Below(n_articles));
  };
  auto emit_edit = [&](std::size_t i, Instant ts) {
    const SynthEditor& e = editors[i];
    const auto a = pick_article(e);
    records.edits.push_back(
        {editor_ids[i], article_ids[a], ts, rng.Bernoulli(e.revert_propensity)});
  };
  for (std::size_t i = 0; i < n_editors; ++i) {
    const SynthEditor& e = editors[i];
    std::int64_t backlog = 0;
    if (e.kind == EditorClass::kVeteran) backlog = rng.Between(3001, 3600);
    if (e.kind == EditorClass::kModerate) {
      backlog = static_cast<std::int64_t>(std::floor(LogUniform(rng, 50.0, 301.0)));
    }
    for (std::int64_t k = 0; k < backlog; ++k) {
      emit_edit(i, RandomInstant(rng, e.registered, window_start));
    }
    for (std::int64_t w = 0; w < params.weeks; ++w) {
      const Instant lo = std::max(e.registered, window_start + Days(7 * w));
      const Instant hi = window_start + Days(7 * (w + 1));
      if (lo >= hi) continue;
      const double share = static_cast<double>((hi - lo).count()) / (7.0 * 86400.0);
      const auto n = rng.Poisson(e.weekly_rate * share);
      for (std::uint64_t k = 0; k < n; ++k) emit_edit(i, RandomInstant(rng, lo, hi));
    }
  }

  // Interactions, biased towards editors who share an interest.
  constexpr InteractionKind kKinds[] = {InteractionKind::kTalkMessage,
                                        InteractionKind::kCoEdit, InteractionKind::kThanks};
  const Instant interaction_floor = std::min(window_start, as_of - Days(365));
  for (std::size_t i = 0; i < n_editors && n_editors > 1; ++i) {
    const SynthEditor& e = editors[i];
    const double mean = e.kind == EditorClass::kVeteran   ? 15.0
                        : e.kind == EditorClass::kModerate ? 6.0
                                                           : 2.0;
    const auto n = rng.Poisson(mean);
    for (std::uint64_t k = 0; k < n; ++k) {
      std::size_t j;
      if (rng.Bernoulli(0.7)) {
        const auto& pool = interested[e.favorites[rng.Below(e.favorites.size())]];
        j = pool[rng.Below(pool.size())];
      } else {
        j = rng.Below(n_editors);
      }
      if (j == i) continue;
      const Instant lo =
          std::max({interaction_floor, e.registered, editors[j].registered});
      if (lo >= as_of) continue;
      records.interactions.push_back(
          {editor_ids[i], editor_ids[j], RandomInstant(rng, lo, as_of), kKinds[rng.Below(3)]});
    }
  }

  // Projects: members drawn from experienced editors interested in the topic.
  for (std::size_t p = 0; p < n_projects; ++p) {
    std::vector<std::uint32_t> pool;
    for (auto i : interested[project_topic[p]]) {
      if (editors[i].kind != EditorClass::kNewcomer) pool.push_back(i);
    }
    if (pool.empty()) pool = interested[project_topic[p]];
    if (pool.empty()) {
      pool.resize(n_editors);
      for (std::size_t i = 0; i < n_editors; ++i) pool[i] = static_cast<std::uint32_t>(i);
    }
    const auto want = static_cast<std::size_t>(rng.Between(3, 15));
    const std::size_t m = std::min(want, pool.size());
    for (std::size_t k = 0; k < m; ++k) {
      std::swap(pool[k], pool[k + rng.Below(pool.size() - k)]);
    }
    const std::size_t organizers = std::min<std::size_t>(m, 1 + rng.Below(2));
    ProjectRecord r;
    r.project_id = project_ids[p];
    r.name = fmt::format("WikiProject {}", category_labels[project_topic[p]]);
    if (p >= n_categories) r.name += fmt::format(" ({})", p / n_categories + 1);
    for (std::size_t k = 0; k < m; ++k) r.members.push_back(editor_ids[pool[k]]);
    for (std::size_t k = 0; k < organizers; ++k) r.organizers.push_back(editor_ids[pool[k]]);
    std::sort(r.members.begin(), r.members.end());
    std::sort(r.organizers.begin(), r.organizers.end());
    records.projects.push_back(std::move(r));
  }

  return Corpus::FromRecords(std::move(records), as_of);
}

ImpactScenario GenerateImpactScenario(const ImpactScenarioParams& params) {
  if (params.invited < 1 || params.controls_per_invited < 1 || params.window_days < 1 ||
      params.delta < 0) {
    throw std::invalid_argument("impact scenario parameters out of range");
  }
  Rng rng(params.seed);
  const auto window = Days(params.window_days);
  constexpr int kInstants = 4;
  const Instant first = ParseInstant("2018-06-04T12:00:00Z");
  std::vector<Instant> instants;
  for (int k = 0; k < kInstants; ++k) instants.push_back(first + Days(7 * k));
  const Instant span_lo = instants.front() - window;
  const Instant span_hi = instants.back() + window;
  const Instant as_of = span_hi + Days(1);
  const double span_windows = static_cast<double>((span_hi - span_lo).count()) /
                              static_cast<double>(std::chrono::seconds(window).count());

  constexpr int kScope = 40;
  constexpr int kOutside = 160;
  constexpr int kMembers = 5;
  constexpr double kOutsideRate = 3.0;  // outside-project edits per window
  const std::string project = "P1";

  CorpusRecords records;
  for (int a = 0; a < kScope; ++a) {
    records.articles.push_back({MakeId('S', a + 1, 3), {"Impact topic"}, {project}});
  }
  for (int a = 0; a < kOutside; ++a) {
    records.articles.push_back({MakeId('O', a + 1, 3), {"Other topic"}, {}});
  }
  auto scope_article = [&] { return MakeId('S', rng.Between(1, kScope), 3); };
  auto outside_article = [&] { return MakeId('O', rng.Between(1, kOutside), 3); };

  ProjectRecord pr{project, "WikiProject Impact", {}, {}};
  for (int m = 0; m < kMembers; ++m) {
    const std::string id = MakeId('M', m + 1, 2);
    records.editors.push_back({id, span_lo - Days(2000)});
    pr.members.push_back(id);
    for (int k = 0; k < 20; ++k) {
      records.edits.push_back({id, scope_article(), RandomInstant(rng, span_lo, span_hi), false});
    }
  }
  pr.organizers.push_back(pr.members.front());
  records.projects.push_back(pr);

  ImpactScenario out;
  const std::int64_t total = params.invited * (1 + params.controls_per_invited);
  const int width = Digits(total);
  for (std::int64_t i = 0; i < total; ++i) {
    const std::string id = MakeId('E', i + 1, width);
    const bool invited = i < params.invited;
    // Half stay below the brand-new edit threshold, half carry a backlog that
    // makes them moderately experienced; both registered well before.
    const bool brand_new = rng.Bernoulli(0.5);
    const Instant registered = span_lo - Days(rng.Between(40, 700));
    records.editors.push_back({id, registered});
    const std::int64_t backlog = brand_new ? rng.Between(0, 15) : rng.Between(60, 400);
    for (std::int64_t k = 0; k < backlog; ++k) {
      records.edits.push_back({id, outside_article(), RandomInstant(rng, registered, span_lo),
                               false});
    }
    const double lambda = rng.Uniform(0.5, 2.0);
    const auto n_in = rng.Poisson(lambda * span_windows);
    for (std::uint64_t k = 0; k < n_in; ++k) {
      records.edits.push_back({id, scope_article(), RandomInstant(rng, span_lo, span_hi), false});
    }
    const auto n_out = rng.Poisson(kOutsideRate * span_windows);
    for (std::uint64_t k = 0; k < n_out; ++k) {
      records.edits.push_back({id, outside_article(), RandomInstant(rng, span_lo, span_hi),
                               false});
    }
    if (!invited) continue;
    const Instant t = instants[static_cast<std::size_t>(i % kInstants)];
    for (std::int64_t k = 0; k < params.delta; ++k) {
      const auto offset = 1 + rng.Below(std::chrono::seconds(window).count());
      records.edits.push_back({id, scope_article(), t + std::chrono::seconds(offset), false});
    }
    FeedbackRecord f;
    f.batch_id = MakeBatchId(project, t, static_cast<std::size_t>(i % kInstants));
    f.project_id = project;
    f.editor_id = id;
    f.algorithm = kAllAlgorithms[static_cast<std::size_t>(i % 4)];
    f.pool = brand_new ? ExperienceTier::kBrandNew : ExperienceTier::kModeratelyExperienced;
    f.invited = true;
    f.decided_at = t;
    out.feedback.push_back(std::move(f));
  }
  out.corpus = Corpus::FromRecords(std::move(records), as_of);
  return out;
}

}  // namespace wikirec

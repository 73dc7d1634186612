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

#include "wikirec/evalkit.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "wikirec/random.h"

namespace wikirec {

Json FeedbackToJson(const FeedbackRecord& r) {
  Json obj = {{"batch_id", r.batch_id},
              {"project_id", r.project_id},
              {"editor_id", r.editor_id},
              {"algorithm", std::string(AlgorithmName(r.algorithm))},
              {"pool", std::string(TierName(r.pool))},
              {"invited", r.invited},
              {"rating", r.rating ? Json(*r.rating) : Json(nullptr)},
              {"decided_at", FormatInstant(r.decided_at)}};
  if (r.joined) obj["joined"] = *r.joined;
  return obj;
}

FeedbackRecord FeedbackFromJson(const Json& obj) {
  FeedbackRecord r;
  r.batch_id = RequireString(obj, "batch_id");
  r.project_id = RequireString(obj, "project_id");
  r.editor_id = RequireString(obj, "editor_id");
  const std::string& alg = RequireString(obj, "algorithm");
  auto a = ParseAlgorithm(alg);
  if (!a) throw RecordError("algorithm", "unknown algorithm \"" + alg + "\"");
  r.algorithm = *a;
  const std::string& pool = RequireString(obj, "pool");
  auto t = ParseTier(pool);
  if (!t || *t == ExperienceTier::kHighlyExperienced) {
    throw RecordError("pool", "unknown pool \"" + pool + "\"");
  }
  r.pool = *t;
  r.invited = RequireBool(obj, "invited");
  if (auto it = obj.find("rating"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw RecordError("rating", "rating must be an integer 1-5");
    const auto v = it->get<std::int64_t>();
    if (v < 1 || v > 5) {
      throw RecordError("rating", "rating must be between 1 and 5 (got " +
                                      std::to_string(v) + ")");
    }
    r.rating = static_cast<int>(v);
  }
  r.decided_at = RequireInstant(obj, "decided_at");
  if (auto it = obj.find("joined"); it != obj.end() && !it->is_null()) {
    if (!it->is_boolean()) throw RecordError("joined", "joined must be a boolean");
    r.joined = it->get<bool>();
  }
  return r;
}

double InvitationRate(std::span<const FeedbackRecord> feedback, Algorithm algorithm) {
  std::size_t decided = 0;
  std::size_t invited = 0;
  for (const auto& r : feedback) {
    if (r.algorithm != algorithm) continue;
    ++decided;
    if (r.invited) ++invited;
  }
  if (decided == 0) {
    throw EvalError(fmt::format("no decisions recorded for {}", AlgorithmName(algorithm)));
  }
  return static_cast<double>(invited) / static_cast<double>(decided);
}

std::vector<double> Ratings(std::span<const FeedbackRecord> feedback,
                            std::span<const Algorithm> algorithms) {
  std::vector<double> out;
  for (const auto& r : feedback) {
    if (!r.rating) continue;
    if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end()) {
      continue;
    }
    out.push_back(*r.rating);
  }
  return out;
}

RatingSummary MeanRating(std::span<const FeedbackRecord> feedback, Algorithm algorithm) {
  // Integer ratings: the sum is exact, so the mean is a single rounding.
  std::int64_t sum = 0;
  std::size_t n = 0;
  for (const auto& r : feedback) {
    if (r.algorithm != algorithm || !r.rating) continue;
    sum += *r.rating;
    ++n;
  }
  if (n == 0) {
    throw EvalError(fmt::format("no rated decisions for {}", AlgorithmName(algorithm)));
  }
  return {static_cast<double>(sum) / static_cast<double>(n), n};
}

stats::WelchResult CompareRatings(std::span<const FeedbackRecord> feedback,
                                  Algorithm algorithm,
                                  std::span<const Algorithm> others) {
  const Algorithm self[] = {algorithm};
  const auto a = Ratings(feedback, self);
  const auto b = Ratings(feedback, others);
  return stats::WelchTTest(a, b);
}

namespace {

std::vector<Algorithm> OthersThan(Algorithm algorithm) {
  std::vector<Algorithm> others;
  for (Algorithm a : kAllAlgorithms) {
    if (a != algorithm) others.push_back(a);
  }
  return others;
}

std::size_t PoolSlot(ExperienceTier pool) {
  return pool == ExperienceTier::kBrandNew ? 0 : 1;
}

}  // namespace

stats::WelchResult CompareRatings(std::span<const FeedbackRecord> feedback,
                                  Algorithm algorithm) {
  const auto others = OthersThan(algorithm);
  return CompareRatings(feedback, algorithm, others);
}

std::array<PoolBalance, 2> TierBalance(std::span<const FeedbackRecord> feedback) {
  std::array<PoolBalance, 2> out;
  out[0].pool = kPools[0];
  out[1].pool = kPools[1];
  for (const auto& r : feedback) {
    auto& slot = out[PoolSlot(r.pool)];
    ++slot.decisions;
    if (r.invited) ++slot.invited;
  }
  for (auto& slot : out) {
    if (slot.decisions == 0) {
      throw EvalError(fmt::format("no decisions recorded for pool {}", TierName(slot.pool)));
    }
    slot.rate = static_cast<double>(slot.invited) / static_cast<double>(slot.decisions);
  }
  return out;
}

MetricsReport ComputeMetrics(std::span<const FeedbackRecord> feedback) {
  MetricsReport report;
  report.total_decisions = feedback.size();
  for (std::size_t i = 0; i < kAllAlgorithms.size(); ++i) {
    AlgorithmMetrics& m = report.algorithms[i];
    m.algorithm = kAllAlgorithms[i];
    for (const auto& r : feedback) {
      if (r.algorithm != m.algorithm) continue;
      ++m.decisions;
      if (r.invited) ++m.invited;
    }
    if (m.decisions > 0) m.invitation_rate = InvitationRate(feedback, m.algorithm);
    try {
      const RatingSummary s = MeanRating(feedback, m.algorithm);
      m.mean_rating = s.mean;
      m.rating_count = s.n;
    } catch (const EvalError&) {
    }
  }

  auto compare = [&](Algorithm a, std::vector<Algorithm> against) {
    RatingComparison c;
    c.algorithm = a;
    c.against = std::move(against);
    try {
      c.result = CompareRatings(feedback, a, c.against);
    } catch (const stats::StatsError& e) {
      c.note = e.what();
    }
    report.comparisons.push_back(std::move(c));
  };
  for (Algorithm a : kAllAlgorithms) compare(a, OthersThan(a));
  for (std::size_t i = 0; i < kAllAlgorithms.size(); ++i) {
    for (std::size_t j = i + 1; j < kAllAlgorithms.size(); ++j) {
      compare(kAllAlgorithms[i], {kAllAlgorithms[j]});
    }
  }

  report.pools[0].pool = kPools[0];
  report.pools[1].pool = kPools[1];
  for (const auto& r : feedback) {
    auto& slot = report.pools[PoolSlot(r.pool)];
    ++slot.decisions;
    if (r.invited) ++slot.invited;
  }
  for (auto& slot : report.pools) {
    if (slot.decisions > 0) {
      slot.rate = static_cast<double>(slot.invited) / static_cast<double>(slot.decisions);
    }
  }
  return report;
}

namespace {

Json Optional(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json PoolsToJson(const std::array<PoolBalance, 2>& pools) {
  Json out = Json::array();
  for (const auto& p : pools) {
    out.push_back({{"pool", std::string(TierName(p.pool))},
                   {"decisions", p.decisions},
                   {"invited", p.invited},
                   {"invitation_rate", Optional(p.rate)}});
  }
  return out;
}

}  // namespace

Json MetricsToJson(const MetricsReport& report) {
  Json algorithms = Json::array();
  for (const auto& m : report.algorithms) {
    algorithms.push_back({{"algorithm", std::string(AlgorithmName(m.algorithm))},
                          {"decisions", m.decisions},
                          {"invited", m.invited},
                          {"invitation_rate", Optional(m.invitation_rate)},
                          {"mean_rating", Optional(m.mean_rating)},
                          {"rating_count", m.rating_count}});
  }
  Json comparisons = Json::array();
  for (const auto& c : report.comparisons) {
    Json against = Json::array();
    for (Algorithm a : c.against) against.push_back(std::string(AlgorithmName(a)));
    Json entry = {{"algorithm", std::string(AlgorithmName(c.algorithm))},
                  {"against", against},
                  {"test", "welch_two_sample_t"}};
    if (c.result) {
      entry["t"] = c.result->t;
      entry["df"] = c.result->df;
      entry["p"] = c.result->p;
    } else {
      entry["t"] = nullptr;
      entry["df"] = nullptr;
      entry["p"] = nullptr;
      entry["note"] = c.note;
    }
    comparisons.push_back(std::move(entry));
  }
  return {{"total_decisions", report.total_decisions},
          {"algorithms", algorithms},
          {"comparisons", comparisons},
          {"pools", PoolsToJson(report.pools)}};
}

namespace {

struct WindowStats {
  std::uint32_t pre_in = 0;
  std::uint32_t post_in = 0;
  std::uint32_t pre_out = 0;
  std::uint32_t post_out = 0;
  std::uint32_t total_before = 0;
  ExperienceTier tier = ExperienceTier::kBrandNew;
  bool registered = false;
};

std::vector<WindowStats> ComputeWindows(const Corpus& corpus, ProjectIndex project,
                                        Instant t, std::int64_t window_days,
                                        const Config& config) {
  const auto n = static_cast<std::int64_t>(corpus.editors().size());
  std::vector<WindowStats> out(static_cast<std::size_t>(n));
  const Instant lo = t - Days(window_days);
  const Instant hi = t + Days(window_days);
  const auto edits = corpus.edits();
#pragma omp parallel for schedule(dynamic, 128)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto e = static_cast<EditorIndex>(i);
    WindowStats& w = out[static_cast<std::size_t>(i)];
    const auto all = corpus.EditsOf(e);
    auto before_t = std::partition_point(all.begin(), all.end(), [&](std::uint32_t k) {
      return edits[k].timestamp < t;
    });
    w.total_before = static_cast<std::uint32_t>(before_t - all.begin());
    w.registered = corpus.editor(e).registered_at < t;
    w.tier = ClassifyTier(w.total_before, corpus.editor(e).registered_at, t, config);
    auto first = std::partition_point(all.begin(), all.end(), [&](std::uint32_t k) {
      return edits[k].timestamp < lo;
    });
    for (auto it = first; it != all.end(); ++it) {
      const auto& edit = edits[*it];
      if (edit.timestamp > hi) break;
      if (edit.timestamp == t) continue;
      const auto& scope = corpus.article(edit.article).in_scope_of;
      const bool in = std::binary_search(scope.begin(), scope.end(), project);
      if (edit.timestamp < t) {
        ++(in ? w.pre_in : w.pre_out);
      } else {
        ++(in ? w.post_in : w.post_out);
      }
    }
  }
  return out;
}

template <typename T>
T AbsDiff(T a, T b) {
  return a > b ? a - b : b - a;
}

ImpactSummary Summarize(const std::vector<const MatchedPair*>& pairs) {
  ImpactSummary s;
  s.treated = pairs.size();
  if (pairs.empty()) return s;
  double ip = 0, iq = 0, bp = 0, bq = 0, op = 0, oq = 0;
  for (const MatchedPair* p : pairs) {
    ip += p->invited_pre;
    iq += p->invited_post;
    bp += p->baseline_pre;
    bq += p->baseline_post;
    op += p->invited_outside_pre;
    oq += p->invited_outside_post;
  }
  const double n = static_cast<double>(pairs.size());
  s.invited_pre_mean = ip / n;
  s.invited_post_mean = iq / n;
  s.baseline_pre_mean = bp / n;
  s.baseline_post_mean = bq / n;
  s.did_estimate = ((iq - ip) - (bq - bp)) / n;
  s.invited_outside_change = (oq - op) / n;
  return s;
}

}  // namespace

ImpactReport ImpactAnalysis(std::span<const FeedbackRecord> feedback,
                            const Corpus& corpus, std::int64_t window_days,
                            JoinSignal join_signal, const Config& config) {
  if (window_days < 1) throw EvalError("impact window must be at least one day");
  ImpactReport report;
  report.window_days = window_days;
  report.join_signal = join_signal;

  // (project_id, editor_id) -> first qualifying invitation instant.
  std::map<std::pair<std::string, std::string>, Instant> treated;
  std::map<std::string, std::set<std::string>> invited_to;
  for (const auto& r : feedback) {
    if (!r.invited) continue;
    invited_to[r.project_id].insert(r.editor_id);
    if (join_signal == JoinSignal::kJoined && !(r.joined && *r.joined)) continue;
    auto key = std::make_pair(r.project_id, r.editor_id);
    auto [it, inserted] = treated.emplace(key, r.decided_at);
    if (!inserted && r.decided_at < it->second) it->second = r.decided_at;
  }

  std::map<std::pair<ProjectIndex, Instant>, std::vector<WindowStats>> cache;
  for (const auto& [key, t] : treated) {
    const auto& [project_id, editor_id] = key;
    auto project = corpus.FindProject(project_id);
    auto editor = corpus.FindEditor(editor_id);
    if (!project || !editor) {
      report.skipped.push_back({project_id, editor_id, "not present in corpus"});
      continue;
    }
    if (t + Days(window_days) > corpus.as_of()) {
      report.skipped.push_back(
          {project_id, editor_id, "post window extends past the corpus as_of"});
      continue;
    }
    auto& windows = cache[{*project, t}];
    if (windows.empty()) windows = ComputeWindows(corpus, *project, t, window_days, config);
    const WindowStats& me = windows[*editor];
    const auto& excluded = invited_to[project_id];

    std::optional<EditorIndex> best;
    std::tuple<std::uint32_t, std::uint32_t, EditorIndex> best_key{};
    for (EditorIndex e = 0; e < windows.size(); ++e) {
      const WindowStats& w = windows[e];
      if (e == *editor || !w.registered || w.tier != me.tier) continue;
      if (corpus.IsMember(e, *project)) continue;
      if (excluded.contains(corpus.editor(e).id)) continue;
      const auto k = std::make_tuple(AbsDiff(w.pre_in, me.pre_in),
                                     AbsDiff(w.total_before, me.total_before), e);
      if (!best || k < best_key) {
        best = e;
        best_key = k;
      }
    }
    if (!best) {
      report.skipped.push_back({project_id, editor_id, "no eligible baseline editor"});
      continue;
    }
    const WindowStats& b = windows[*best];
    report.pairs.push_back({project_id, editor_id, corpus.editor(*best).id, me.tier, t,
                            me.pre_in, me.post_in, b.pre_in, b.post_in, me.pre_out,
                            me.post_out});
  }

  std::vector<const MatchedPair*> all;
  std::array<std::vector<const MatchedPair*>, 2> pooled;
  for (const auto& p : report.pairs) {
    all.push_back(&p);
    if (p.tier != ExperienceTier::kHighlyExperienced) pooled[PoolSlot(p.tier)].push_back(&p);
  }
  if (!all.empty()) report.overall = Summarize(all);
  for (std::size_t i = 0; i < 2; ++i) {
    if (!pooled[i].empty()) report.by_pool[i] = Summarize(pooled[i]);
  }
  return report;
}

namespace {

Json SummaryToJson(const std::optional<ImpactSummary>& s) {
  if (!s) return nullptr;
  return {{"treated", s->treated},
          {"invited", {{"pre_mean", s->invited_pre_mean}, {"post_mean", s->invited_post_mean}}},
          {"baseline",
           {{"pre_mean", s->baseline_pre_mean}, {"post_mean", s->baseline_post_mean}}},
          {"did_estimate", s->did_estimate},
          {"invited_outside_change", s->invited_outside_change}};
}

}  // namespace

Json ImpactToJson(const ImpactReport& report) {
  Json pools = Json::array();
  for (std::size_t i = 0; i < 2; ++i) {
    pools.push_back({{"pool", std::string(TierName(kPools[i]))},
                     {"summary", SummaryToJson(report.by_pool[i])}});
  }
  Json pairs = Json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"project_id", p.project_id},
                     {"invited_editor", p.invited_editor},
                     {"baseline_editor", p.baseline_editor},
                     {"tier", std::string(TierName(p.tier))},
                     {"invited_at", FormatInstant(p.invited_at)},
                     {"invited_pre", p.invited_pre},
                     {"invited_post", p.invited_post},
                     {"baseline_pre", p.baseline_pre},
                     {"baseline_post", p.baseline_post},
                     {"invited_outside_pre", p.invited_outside_pre},
                     {"invited_outside_post", p.invited_outside_post}});
  }
  Json skipped = Json::array();
  for (const auto& s : report.skipped) {
    skipped.push_back(
        {{"project_id", s.project_id}, {"editor_id", s.editor_id}, {"reason", s.reason}});
  }
  return {{"window_days", report.window_days},
          {"join_signal", report.join_signal == JoinSignal::kInvited ? "invited" : "joined"},
          {"overall", SummaryToJson(report.overall)},
          {"pools", pools},
          {"pairs", pairs},
          {"skipped", skipped}};
}

std::string FormatReportTable(const MetricsReport& metrics, const ImpactReport& impact) {
  auto opt = [](const std::optional<double>& v, const char* pattern) {
    return v ? fmt::format(fmt::runtime(pattern), *v) : std::string("-");
  };
  std::string out = fmt::format("Decisions: {}\n\n", metrics.total_decisions);
  out += fmt::format("{:<16} {:>9} {:>8} {:>10} {:>8} {:>7}\n", "algorithm",
                     "decisions", "invited", "inv. rate", "rating", "rated");
  for (const auto& m : metrics.algorithms) {
    out += fmt::format("{:<16} {:>9} {:>8} {:>10} {:>8} {:>7}\n",
                       AlgorithmName(m.algorithm), m.decisions, m.invited,
                       opt(m.invitation_rate, "{:.3f}"), opt(m.mean_rating, "{:.3f}"),
                       m.rating_count);
  }
  out += "\nRating comparisons (Welch two-sample t, two-sided):\n";
  for (const auto& c : metrics.comparisons) {
    std::string against;
    for (Algorithm a : c.against) {
      if (!against.empty()) against += "+";
      against += AlgorithmName(a);
    }
    if (c.result) {
      out += fmt::format("  {} vs {}: t = {:.3f}, df = {:.2f}, p = {:.4g}\n",
                         AlgorithmName(c.algorithm), against, c.result->t, c.result->df,
                         c.result->p);
    } else {
      out += fmt::format("  {} vs {}: n/a ({})\n", AlgorithmName(c.algorithm), against,
                         c.note);
    }
  }
  out += "\nPools:\n";
  for (const auto& p : metrics.pools) {
    out += fmt::format("  {:<24} decisions {:>6}  invited {:>6}  rate {}\n",
                       TierName(p.pool), p.decisions, p.invited, opt(p.rate, "{:.3f}"));
  }
  out += fmt::format("\nImpact ({}-day windows, {} matched pairs, {} skipped):\n",
                     impact.window_days, impact.pairs.size(), impact.skipped.size());
  auto line = [&](const char* label, const std::optional<ImpactSummary>& s) {
    if (!s) {
      out += fmt::format("  {:<24} -\n", label);
      return;
    }
    out += fmt::format(
        "  {:<24} n {:>5}  invited {:.2f} -> {:.2f}  baseline {:.2f} -> {:.2f}  "
        "DiD {:+.3f}  outside change {:+.3f}\n",
        label, s->treated, s->invited_pre_mean, s->invited_post_mean,
        s->baseline_pre_mean, s->baseline_post_mean, s->did_estimate,
        s->invited_outside_change);
  };
  line("all", impact.overall);
  for (std::size_t i = 0; i < 2; ++i) line(TierName(kPools[i]).data(), impact.by_pool[i]);
  return out;
}

std::vector<FeedbackRecord> SimulateFeedback(std::span<const LedgerEntry> ledger,
                                             std::uint64_t seed,
                                             const OrganizerSimulation& sim) {
  Rng rng(seed);
  std::vector<FeedbackRecord> out;
  for (const auto& e : ledger) {
    const auto a = static_cast<std::size_t>(e.algorithm);
    // Draw every variate so one record's choices never shift another's.
    const bool decide = rng.Bernoulli(sim.decide_probability);
    const bool invite = rng.Bernoulli(sim.invite_probability[a]);
    const bool rate = rng.Bernoulli(sim.rate_probability);
    const double draw = sim.rating_mean[a] + sim.rating_sd * rng.Normal();
    if (!decide) continue;
    FeedbackRecord r;
    r.batch_id = e.batch_id;
    r.project_id = e.project_id;
    r.editor_id = e.editor_id;
    r.algorithm = e.algorithm;
    r.pool = e.pool;
    r.invited = invite;
    if (rate) r.rating = static_cast<int>(std::clamp(std::round(draw), 1.0, 5.0));
    r.decided_at = e.issued_at;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace wikirec

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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Tolerances are fixed below.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>
#include <sys/wait.h>

#include "support.h"
#include "wikirec/evalkit.h"
#include "wikirec/pipeline.h"
#include "wikirec/ranking.h"
#include "wikirec/stats.h"
#include "wikirec/synthetic.h"

namespace wikirec {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kCosineTol = 1e-9;
constexpr double kMetricTol = 1e-12;
constexpr double kStatsTol = 1e-6;
constexpr double kImpactRelTol = 0.20;
constexpr double kImpactHitRate = 0.90;
constexpr double kNullImpactTol = 0.5;
constexpr double kOracleSeconds = 120;
constexpr double kSynthSeconds = 10;
constexpr double kScheduleSeconds = 60;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int g_failures = 0;

template <typename Fn>
void Check(const char* name, Fn&& fn) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!o.pass) ++g_failures;
  fmt::print("{} {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", name, o.detail, secs);
  std::fflush(stdout);
}

double Seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome ScorerOracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t compared = 0;
  std::size_t mismatches = 0;
  std::string first;
  for (int run = 0; run < 50; ++run) {
    SyntheticParams p;
    p.editor_count = 10 + static_cast<std::int64_t>(rng() % 191);
    p.project_count = 1 + static_cast<std::int64_t>(rng() % 10);
    p.category_count = 2 + static_cast<std::int64_t>(rng() % 12);
    p.weeks = 1 + static_cast<std::int64_t>(rng() % 10);
    p.seed = rng();
    const Corpus c = GenerateSynthetic(p);
    const CorpusRecords r = c.ToRecords();
    Config config;
    config.coedit_top_k = 1 + static_cast<std::int64_t>(rng() % 6);
    const Instant as_of = c.as_of() - Days(static_cast<int>(rng() % 15));
    const testing::oracle::Context oracle(r, as_of, config);
    const ProfileSnapshot snap = ProfileSnapshot::Build(c, as_of, config);
    for (ProjectIndex pi = 0; pi < c.projects().size(); ++pi) {
      const ProjectScorer scorer(c, snap, pi, config);
      const std::string& project = c.project(pi).id;
      for (EditorIndex e = 0; e < c.editors().size(); ++e) {
        const std::string& editor = c.editor(e).id;
        const bool eligible = oracle.Eligible(editor, project);
        if (eligible != scorer.IsEligible(e) ||
            eligible != Eligible(e, pi, c, as_of, config)) {
          ++mismatches;
          if (first.empty()) first = fmt::format("eligibility of {} for {}", editor, project);
          continue;
        }
        if (!eligible) continue;
        for (Algorithm a : kAllAlgorithms) {
          const double want = oracle.Score(a, editor, project);
          const double fast = scorer.Score(a, e);
          const double slow = ScorePair(a, e, pi, c, as_of, config);
          const double tol = a == Algorithm::kRuleBased ? 0.0 : kCosineTol;
          ++compared;
          if (std::fabs(fast - want) > tol || std::fabs(slow - want) > tol) {
            ++mismatches;
            if (first.empty()) {
              first = fmt::format("{} {} {}: got {} / {}, oracle {}", AlgorithmName(a), editor,
                                  project, fast, slow, want);
            }
          }
        }
      }
    }
  }
  const double secs = Seconds(t0);
  Outcome o;
  o.pass = mismatches == 0 && compared > 0 && secs < kOracleSeconds;
  o.detail = fmt::format("50 corpora, {} scores compared, {} mismatches, {:.1f} s (limit {} s){}",
                         compared, mismatches, secs, kOracleSeconds,
                         first.empty() ? "" : "; first: " + first);
  return o;
}

Outcome RuleThreshold() {
  const Instant as_of = testing::T("2020-01-01T00:00:00Z");
  testing::CorpusBuilder b(as_of);
  b.Editor("four", as_of - Days(10)).Editor("five", as_of - Days(10));
  b.Editor("member", as_of - Days(400)).Project("P", {"member"});
  b.Article("in", {"Science"}, {"P"}).Article("out", {"Science"});
  b.Edits("four", "in", 4, as_of - Days(5)).Edits("four", "out", 9, as_of - Days(4));
  b.Edits("five", "in", 5, as_of - Days(5));
  const Corpus c = b.Build();
  const Config config;
  RecommendationLedger ledger;
  const Batch batch = GenerateBatch(0, c, as_of, ledger, config);
  const BatchCell* cell = batch.FindCell(Algorithm::kRuleBased, ExperienceTier::kBrandNew);
  std::vector<std::string> ids;
  for (const auto& x : cell->candidates) ids.push_back(x.editor_id);
  const bool pass = ids == std::vector<std::string>{"five"} &&
                    ScoreRuleBased(c.EditorIndexOf("four"), 0, c, as_of, config) == 0 &&
                    ScoreRuleBased(c.EditorIndexOf("five"), 0, c, as_of, config) == 5;
  return {pass, fmt::format("rule-based cell = [{}]; 4 edits excluded, 5 included",
                            fmt::join(ids, ", "))};
}

// The 26-week replay shared by the pool, dedupe and lookahead checks.
struct Replay {
  Corpus corpus;
  Config config;
  std::vector<Batch> batches;
  RecommendationLedger ledger;
};

const Replay& LargeReplay() {
  static const Replay replay = [] {
    SyntheticParams p;
    p.editor_count = 10000;
    p.project_count = 200;
    p.category_count = 40;
    p.weeks = 26;
    p.seed = 7;
    Replay r{GenerateSynthetic(p), Config{}, {}, {}};
    const Instant start = r.corpus.as_of() - Days(7 * 26);
    r.batches = RunSchedule(r.corpus, start, 26, r.ledger, r.config);
    return r;
  }();
  return replay;
}

Outcome PoolSeparation() {
  const Replay& r = LargeReplay();
  std::size_t high = 0;
  std::size_t both = 0;
  std::size_t candidates = 0;
  for (const Batch& b : r.batches) {
    std::map<std::string, std::set<ExperienceTier>> pools;
    for (const auto& cell : b.cells) {
      for (const auto& x : cell.candidates) {
        ++candidates;
        const EditorIndex e = r.corpus.EditorIndexOf(x.editor_id);
        if (TierOf(e, r.corpus, b.as_of, r.config) == ExperienceTier::kHighlyExperienced) ++high;
        pools[x.editor_id].insert(cell.pool);
      }
    }
    for (const auto& [id, set] : pools) both += set.size() > 1;
  }
  return {high == 0 && both == 0 && candidates > 0,
          fmt::format("{} batches, {} candidates, {} highly experienced, {} in both pools",
                      r.batches.size(), candidates, high, both)};
}

Outcome DedupeSoundness() {
  const Replay& r = LargeReplay();
  // (project, editor) -> batch that issued it.
  std::map<std::pair<std::string, std::string>, std::string> issued;
  std::size_t repeats = 0;
  for (const auto& e : r.ledger.entries()) {
    auto [it, fresh] = issued.emplace(std::make_pair(e.project_id, e.editor_id), e.batch_id);
    if (!fresh && it->second != e.batch_id) ++repeats;
  }
  return {repeats == 0 && !issued.empty(),
          fmt::format("{} ledger entries, {} distinct (project, editor) pairs, {} re-issued in a "
                      "later batch",
                      r.ledger.size(), issued.size(), repeats)};
}

Outcome NoLookahead() {
  const Replay& r = LargeReplay();
  std::map<std::string, std::vector<const LedgerEntry*>> by_batch;
  for (const auto& e : r.ledger.entries()) by_batch[e.batch_id].push_back(&e);
  std::mt19937_64 rng(99);
  std::vector<std::size_t> picks(r.batches.size());
  std::iota(picks.begin(), picks.end(), 0);
  std::shuffle(picks.begin(), picks.end(), rng);
  picks.resize(20);
  std::sort(picks.begin(), picks.end());
  std::size_t identical = 0;
  std::size_t nonempty = 0;
  for (std::size_t idx : picks) {
    const Batch& target = r.batches[idx];
    RecommendationLedger prior;
    for (std::size_t i = 0; i < idx; ++i) {
      const Batch& b = r.batches[i];
      prior.RecordBatch(b.project_id, b.batch_id);
      for (const LedgerEntry* e : by_batch[b.batch_id]) prior.Append(*e);
    }
    const Corpus cut = r.corpus.TruncatedAt(target.as_of);
    const Batch again = GenerateBatch(cut.ProjectIndexOf(target.project_id), cut, target.as_of,
                                      prior, r.config);
    identical += again.cells == target.cells && again.batch_id == target.batch_id;
    for (const auto& cell : target.cells) {
      if (!cell.candidates.empty()) {
        ++nonempty;
        break;
      }
    }
  }
  return {identical == picks.size(),
          fmt::format("{}/{} sampled batches identical on the truncated corpus ({} non-empty)",
                      identical, picks.size(), nonempty)};
}

Outcome MetricFixture() {
  testing::TempDir dir;
  const fs::path file = dir.path() / "feedback.jsonl";
  const std::array<int, 4> invited = {47, 16, 22, 28};
  {
    std::ofstream out(file);
    for (std::size_t a = 0; a < 4; ++a) {
      for (int i = 0; i < 100; ++i) {
        FeedbackRecord r;
        r.batch_id = "P/20190101T000000Z/0";
        r.project_id = "P";
        r.editor_id = fmt::format("E{:03}", i);
        r.algorithm = kAllAlgorithms[a];
        r.pool = kPools[i % 2];
        r.invited = i < invited[a];
        // Rule-based ratings: 19 threes and 6 fours, mean 3.24.
        if (a == 0 && i < 25) r.rating = i < 19 ? 3 : 4;
        if (a > 0 && i < 10) r.rating = 2 + i % 3;
        r.decided_at = testing::T("2019-01-01T00:00:00Z");
        out << ToJsonLine(FeedbackToJson(r));
      }
    }
  }
  std::vector<FeedbackRecord> feedback;
  ForEachJsonLine(file, [&](const Json& obj, std::size_t) {
    feedback.push_back(FeedbackFromJson(obj));
  });
  const MetricsReport m = ComputeMetrics(feedback);
  const std::array<double, 4> want = {0.47, 0.16, 0.22, 0.28};
  bool pass = m.total_decisions == 400;
  std::vector<std::string> rates;
  for (std::size_t a = 0; a < 4; ++a) {
    const auto& rate = m.algorithms[a].invitation_rate;
    pass = pass && rate && std::fabs(*rate - want[a]) <= kMetricTol &&
           m.algorithms[a].decisions == 100;
    rates.push_back(rate ? fmt::format("{:.3f}", *rate) : "none");
  }
  const auto& mean = m.algorithms[0].mean_rating;
  pass = pass && mean && std::fabs(*mean - 3.24) <= kMetricTol;
  return {pass, fmt::format("rates {} (tol {}), rule-based mean rating {:.12f}",
                            fmt::join(rates, "/"), kMetricTol, mean ? *mean : NAN)};
}

Outcome StatisticsOracle() {
  std::mt19937_64 rng(314);
  double worst_t = 0;
  double worst_p = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<FeedbackRecord> f;
    const int na = 2 + static_cast<int>(rng() % 80);
    const int nb = 2 + static_cast<int>(rng() % 200);
    const int shift = static_cast<int>(rng() % 3);
    auto rating = [&](int bias) {
      return std::clamp(1 + static_cast<int>(rng() % 5) + (rng() % 3 == 0 ? bias : 0), 1, 5);
    };
    for (int i = 0; i < na; ++i) {
      FeedbackRecord r;
      r.algorithm = Algorithm::kRuleBased;
      r.rating = rating(shift);
      f.push_back(r);
    }
    for (int i = 0; i < nb; ++i) {
      FeedbackRecord r;
      r.algorithm = kAllAlgorithms[1 + i % 3];
      r.rating = rating(0);
      f.push_back(r);
    }
    const stats::WelchResult got = CompareRatings(f, Algorithm::kRuleBased);
    // Reference: Welch statistic with Boost's Student t.
    std::vector<double> a, b;
    for (const auto& r : f) (r.algorithm == Algorithm::kRuleBased ? a : b).push_back(*r.rating);
    auto mv = [](const std::vector<double>& x) {
      double m = 0;
      for (double v : x) m += v;
      m /= x.size();
      double ss = 0;
      for (double v : x) ss += (v - m) * (v - m);
      return std::pair<double, double>(m, ss / (x.size() - 1));
    };
    const auto [ma, va] = mv(a);
    const auto [mb, vb] = mv(b);
    const double sa = va / a.size();
    const double sb = vb / b.size();
    const double t = (ma - mb) / std::sqrt(sa + sb);
    const double df = (sa + sb) * (sa + sb) / (sa * sa / (a.size() - 1) + sb * sb / (b.size() - 1));
    const double p =
        2 * boost::math::cdf(boost::math::complement(boost::math::students_t(df), std::fabs(t)));
    worst_t = std::max(worst_t, std::fabs(got.t - t));
    worst_p = std::max(worst_p, std::fabs(got.p - p));
  }
  return {worst_t <= kStatsTol && worst_p <= kStatsTol,
          fmt::format("100 pairs, max |dt| = {:.2e}, max |dp| = {:.2e} (tol {})", worst_t,
                      worst_p, kStatsTol)};
}

Outcome ImpactRecovery() {
  bool pass = true;
  std::vector<std::string> parts;
  for (std::int64_t delta : {2, 5, 10}) {
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      ImpactScenarioParams p;
      p.delta = delta;
      p.invited = 200;
      p.seed = seed * 1000 + static_cast<std::uint64_t>(delta);
      const ImpactScenario s = GenerateImpactScenario(p);
      const ImpactReport r =
          ImpactAnalysis(s.feedback, s.corpus, p.window_days, JoinSignal::kInvited);
      const double est = r.overall ? r.overall->did_estimate : NAN;
      hits += std::fabs(est - delta) <= kImpactRelTol * delta;
    }
    pass = pass && hits >= kImpactHitRate * 20;
    parts.push_back(fmt::format("delta {}: {}/20 within 20%", delta, hits));
  }
  double sum = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ImpactScenarioParams p;
    p.delta = 0;
    p.invited = 200;
    p.seed = 500000 + seed;
    const ImpactScenario s = GenerateImpactScenario(p);
    const ImpactReport r = ImpactAnalysis(s.feedback, s.corpus, p.window_days, JoinSignal::kInvited);
    sum += r.overall ? r.overall->did_estimate : NAN;
  }
  const double mean0 = sum / 100;
  pass = pass && std::fabs(mean0) <= kNullImpactTol;
  parts.push_back(fmt::format("delta 0: mean {:+.3f} over 100 runs", mean0));
  return {pass, fmt::format("{}", fmt::join(parts, "; "))};
}

int RunCli(const std::string& args, std::string* output = nullptr) {
  const std::string cmd = std::string(WIKIREC_CLI) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int raw = ::pclose(pipe);
  if (output) *output = out;
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome Performance() {
  testing::TempDir dir;
  const std::string data = "--data " + dir.path().string();
  std::string out;
  auto t0 = Clock::now();
  int rc = RunCli(data + " synth --editors 10000 --projects 200 --seed 1", &out);
  const double synth = Seconds(t0);
  if (rc != 0) return {false, "synth failed: " + out};
  t0 = Clock::now();
  rc = RunCli(data + " run-schedule --weeks 4", &out);
  const double sched = Seconds(t0);
  if (rc != 0) return {false, "run-schedule failed: " + out};
  return {synth < kSynthSeconds && sched < kScheduleSeconds,
          fmt::format("synth {:.2f} s (limit {}), run-schedule 4 weeks {:.2f} s (limit {})",
                      synth, kSynthSeconds, sched, kScheduleSeconds)};
}

Outcome EndToEndDeterminism() {
  testing::TempDir dir;
  std::array<std::map<std::string, std::string>, 2> files;
  for (int run = 0; run < 2; ++run) {
    const fs::path root = dir.path() / fmt::format("run{}", run);
    const std::string data = "--data " + root.string();
    std::string out;
    for (const std::string& step : std::vector<std::string>{
             " synth --editors 2000 --projects 30 --weeks 10 --seed 11",
          " run-schedule --start 2018-10-23T00:00:00Z --weeks 6",
          " simulate-decisions --seed 11", " evaluate --out " + (root / "report").string()}) {
      if (RunCli(data + step, &out) != 0) return {false, "step failed:" + step + ": " + out};
    }
    for (const char* f : {"batches.jsonl", "ledger.jsonl", "feedback.jsonl", "report/report.txt",
                          "report/metrics.json", "report/impact.json"}) {
      files[run][f] = testing::ReadFile(root / f);
    }
  }
  std::vector<std::string> differing;
  for (const auto& [name, text] : files[0]) {
    if (files[1][name] != text) differing.push_back(name);
  }
  const std::size_t pairs = Json::parse(files[0]["report/impact.json"])["pairs"].size();
  return {differing.empty() && !files[0]["batches.jsonl"].empty(),
          differing.empty()
              ? fmt::format("6 output files byte-identical across two runs ({} bytes of batches, "
                            "{} impact pairs)",
                            files[0]["batches.jsonl"].size(), pairs)
              : "differ: " + fmt::format("{}", fmt::join(differing, ", "))};
}

}  // namespace
}  // namespace wikirec

int main() {
  using namespace wikirec;
  Check("scorer oracle equivalence", ScorerOracle);
  Check("rule threshold boundary", RuleThreshold);
  Check("pool separation", PoolSeparation);
  Check("dedupe soundness", DedupeSoundness);
  Check("no lookahead", NoLookahead);
  Check("metric fixture", MetricFixture);
  Check("statistics oracle", StatisticsOracle);
  Check("impact recovery", ImpactRecovery);
  Check("performance", Performance);
  Check("end-to-end determinism", EndToEndDeterminism);
  fmt::print("{} criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}

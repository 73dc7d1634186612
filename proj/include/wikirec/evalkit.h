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

#ifndef WIKIREC_EVALKIT_H_
#define WIKIREC_EVALKIT_H_

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wikirec/config.h"
#include "wikirec/corpus.h"
#include "wikirec/jsonl.h"
#include "wikirec/pipeline.h"
#include "wikirec/recommenders.h"
#include "wikirec/stats.h"

namespace wikirec {

// One organizer decision on one issued recommendation.
struct FeedbackRecord {
  std::string batch_id;
  std::string project_id;
  std::string editor_id;
  Algorithm algorithm = Algorithm::kRuleBased;
  ExperienceTier pool = ExperienceTier::kBrandNew;
  bool invited = false;
  std::optional<int> rating;  // 1..5
  Instant decided_at{};
  std::optional<bool> joined;  // set once the outcome is known

  bool operator==(const FeedbackRecord&) const = default;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json FeedbackToJson(const FeedbackRecord& record);
// Raises RecordError naming the field (ratings outside 1..5 included).
FeedbackRecord FeedbackFromJson(const Json& obj);

// invited / decided for one algorithm. Throws EvalError without decisions.
double InvitationRate(std::span<const FeedbackRecord> feedback, Algorithm algorithm);

struct RatingSummary {
  double mean = 0.0;
  std::size_t n = 0;
};

// Mean of present ratings. Throws EvalError when none are rated.
RatingSummary MeanRating(std::span<const FeedbackRecord> feedback, Algorithm algorithm);

std::vector<double> Ratings(std::span<const FeedbackRecord> feedback,
                            std::span<const Algorithm> algorithms);

// Welch test of `algorithm`'s ratings against the pooled ratings of
// `others`; the single-argument form pools the remaining three algorithms.
// Throws stats::StatsError on too-small or zero-variance samples.
stats::WelchResult CompareRatings(std::span<const FeedbackRecord> feedback,
                                  Algorithm algorithm,
                                  std::span<const Algorithm> others);
stats::WelchResult CompareRatings(std::span<const FeedbackRecord> feedback,
                                  Algorithm algorithm);

struct PoolBalance {
  ExperienceTier pool = ExperienceTier::kBrandNew;
  std::size_t decisions = 0;
  std::size_t invited = 0;
  std::optional<double> rate;
};

// Per-pool invitation counts and rates; EvalError if a pool has no decisions.
std::array<PoolBalance, 2> TierBalance(std::span<const FeedbackRecord> feedback);

struct AlgorithmMetrics {
  Algorithm algorithm = Algorithm::kRuleBased;
  std::size_t decisions = 0;
  std::size_t invited = 0;
  std::optional<double> invitation_rate;
  std::optional<double> mean_rating;
  std::size_t rating_count = 0;
};

struct RatingComparison {
  Algorithm algorithm = Algorithm::kRuleBased;
  std::vector<Algorithm> against;
  std::optional<stats::WelchResult> result;
  std::string note;  // why `result` is absent
};

struct MetricsReport {
  std::size_t total_decisions = 0;
  std::array<AlgorithmMetrics, 4> algorithms;
  // Each algorithm against the pooled other three, then all six pairs.
  std::vector<RatingComparison> comparisons;
  std::array<PoolBalance, 2> pools;
};

MetricsReport ComputeMetrics(std::span<const FeedbackRecord> feedback);
Json MetricsToJson(const MetricsReport& report);

// Which invited editors count as treated.
enum class JoinSignal { kInvited, kJoined };

struct MatchedPair {
  std::string project_id;
  std::string invited_editor;
  std::string baseline_editor;
  ExperienceTier tier = ExperienceTier::kBrandNew;
  Instant invited_at{};
  std::uint32_t invited_pre = 0;
  std::uint32_t invited_post = 0;
  std::uint32_t baseline_pre = 0;
  std::uint32_t baseline_post = 0;
  std::uint32_t invited_outside_pre = 0;
  std::uint32_t invited_outside_post = 0;
};

struct ImpactSummary {
  std::size_t treated = 0;
  double invited_pre_mean = 0.0;
  double invited_post_mean = 0.0;
  double baseline_pre_mean = 0.0;
  double baseline_post_mean = 0.0;
  double did_estimate = 0.0;
  double invited_outside_change = 0.0;
};

struct SkippedEditor {
  std::string project_id;
  std::string editor_id;
  std::string reason;
};

struct ImpactReport {
  std::int64_t window_days = 0;
  JoinSignal join_signal = JoinSignal::kInvited;
  std::optional<ImpactSummary> overall;
  std::array<std::optional<ImpactSummary>, 2> by_pool;  // order of kPools
  std::vector<MatchedPair> pairs;
  std::vector<SkippedEditor> skipped;
};

// Matched difference-in-differences of within-project edits. Each treated
// (project, editor) is paired with the same-tier non-invited non-member whose
// pre-window in-scope count is nearest (then nearest total edits, then
// editor_id). Windows are [t - w, t) and (t, t + w] around the first
// invitation instant t.
ImpactReport ImpactAnalysis(std::span<const FeedbackRecord> feedback,
                            const Corpus& corpus, std::int64_t window_days,
                            JoinSignal join_signal, const Config& config = {});
Json ImpactToJson(const ImpactReport& report);

// Human-readable summary of both reports.
std::string FormatReportTable(const MetricsReport& metrics, const ImpactReport& impact);

// Synthetic organizer used to exercise the evaluation end to end.
struct OrganizerSimulation {
  double decide_probability = 1.0;
  std::array<double, 4> invite_probability = {0.47, 0.16, 0.22, 0.28};
  double rate_probability = 0.6;
  std::array<double, 4> rating_mean = {3.24, 2.7, 2.7, 2.7};
  double rating_sd = 1.0;
};

std::vector<FeedbackRecord> SimulateFeedback(std::span<const LedgerEntry> ledger,
                                             std::uint64_t seed,
                                             const OrganizerSimulation& sim = {});

}  // namespace wikirec

#endif  // WIKIREC_EVALKIT_H_

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

#ifndef WIKIREC_RECOMMENDERS_H_
#define WIKIREC_RECOMMENDERS_H_

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wikirec/config.h"
#include "wikirec/corpus.h"
#include "wikirec/profiling.h"

namespace wikirec {

enum class Algorithm { kRuleBased, kCategoryBased, kBondsBased, kCoEditBased };

inline constexpr std::array<Algorithm, 4> kAllAlgorithms = {
    Algorithm::kRuleBased, Algorithm::kCategoryBased, Algorithm::kBondsBased,
    Algorithm::kCoEditBased};

// The two separately ranked candidate pools.
inline constexpr std::array<ExperienceTier, 2> kPools = {
    ExperienceTier::kBrandNew, ExperienceTier::kModeratelyExperienced};

std::string_view AlgorithmName(Algorithm algorithm);
std::optional<Algorithm> ParseAlgorithm(std::string_view name);

struct ScoredCandidate {
  std::string editor_id;
  Algorithm algorithm = Algorithm::kRuleBased;
  double score = 0.0;
  std::string explanation;

  bool operator==(const ScoredCandidate&) const = default;
};

// Candidate gate shared by all algorithms: not already a member, not highly
// experienced, registered before as_of, and quality score under the cutoff.
bool Eligible(EditorIndex editor, ProjectIndex project, const Corpus& corpus,
              Instant as_of, const Config& config = {});

// Per-pair scorers, computed straight from the corpus. These are the serial
// reference path; batch generation goes through ProjectScorer instead.

// Edits in [as_of - rule_window_days, as_of) to in-scope articles, or 0 when
// that count is below rule_min_edits.
std::uint64_t ScoreRuleBased(EditorIndex editor, ProjectIndex project,
                             const Corpus& corpus, Instant as_of,
                             const Config& config = {});

// Cosine between the editor's category vector and the project profile.
double ScoreCategoryBased(EditorIndex editor, ProjectIndex project,
                          const Corpus& corpus, Instant as_of);

// Sum of interaction-graph weights to current members.
double ScoreBondsBased(EditorIndex editor, ProjectIndex project, const Corpus& corpus,
                       Instant as_of, const Config& config = {});

// Mean of the top-k member cosines over article edit-count vectors.
double ScoreCoEditBased(EditorIndex editor, ProjectIndex project,
                        const Corpus& corpus, Instant as_of, const Config& config = {});

double ScorePair(Algorithm algorithm, EditorIndex editor, ProjectIndex project,
                 const Corpus& corpus, Instant as_of, const Config& config = {});

// Cosine of two nonnegative integer vectors given their dot product and
// squared norms; 0 when either vector is empty. Every route computes cosines
// through this one expression.
inline double IntegerCosine(std::uint64_t dot, std::uint64_t norm2_a,
                            std::uint64_t norm2_b) {
  if (norm2_a == 0 || norm2_b == 0) return 0.0;
  return static_cast<double>(dot) /
         std::sqrt(static_cast<double>(norm2_a) * static_cast<double>(norm2_b));
}

// Category cosine with the editor vector reduced by the gcd of its weights,
// so replicating every edit c times yields a bit-identical score.
double CategoryCosine(const SparseCounts& editor_vector, const SparseCounts& profile);

namespace reference {

struct RankedScore {
  std::string editor_id;
  double score = 0.0;
};

// Serial ranking that scores every editor with the per-pair functions above.
std::vector<RankedScore> RankCandidates(ProjectIndex project, ExperienceTier pool,
                                        Algorithm algorithm, const Corpus& corpus,
                                        Instant as_of, const Config& config,
                                        std::size_t n);

}  // namespace reference

}  // namespace wikirec

#endif  // WIKIREC_RECOMMENDERS_H_

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

#ifndef WIKIREC_PROFILING_H_
#define WIKIREC_PROFILING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "wikirec/config.h"
#include "wikirec/corpus.h"

namespace wikirec {

enum class ExperienceTier { kBrandNew, kModeratelyExperienced, kHighlyExperienced };

std::string_view TierName(ExperienceTier tier);
std::optional<ExperienceTier> ParseTier(std::string_view name);

// Nonnegative integer weights keyed by a dense index, sorted by key.
using SparseCounts = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

std::uint64_t SquaredNorm(const SparseCounts& v);
std::uint64_t Dot(const SparseCounts& a, const SparseCounts& b);

// The tier rule on its own: more than highly_experienced_min_edits edits is
// HighlyExperienced regardless of registration age; otherwise fewer than
// brand_new_max_edits edits or registration within brand_new_recent_days is
// BrandNew; everything else is ModeratelyExperienced.
ExperienceTier ClassifyTier(std::uint64_t total_edits, Instant registered_at,
                            Instant as_of, const Config& config);

// Edits of `editor` strictly before `as_of`, as indices into corpus.edits().
std::span<const std::uint32_t> EditsBefore(EditorIndex editor, const Corpus& corpus,
                                           Instant as_of);

ExperienceTier TierOf(EditorIndex editor, const Corpus& corpus, Instant as_of,
                      const Config& config = {});

// Revert rate over edits before `as_of`; 0 below the evidence floor.
double QualityScore(EditorIndex editor, const Corpus& corpus, Instant as_of,
                    const Config& config = {});

// weight(c) = edits before as_of to articles carrying category c.
SparseCounts CategoryVector(EditorIndex editor, const Corpus& corpus, Instant as_of);

// weight(c) = in-scope articles of the project carrying category c.
SparseCounts ProjectCategoryProfile(ProjectIndex project, const Corpus& corpus);

struct EditorProfile {
  EditorIndex editor = 0;
  ExperienceTier tier = ExperienceTier::kBrandNew;
  std::uint64_t total_edits = 0;
  std::uint64_t reverted_edits = 0;
  double revert_rate = 0.0;
  double quality_score = 0.0;
  SparseCounts category_vector;
  // Edits in the trailing rule window, per project whose scope they touch.
  std::map<ProjectIndex, std::uint64_t> recent_in_scope_edits;
};

EditorProfile ProfileEditor(EditorIndex editor, const Corpus& corpus, Instant as_of,
                            const Config& config = {});

// Undirected editor graph; weight(a, b) = ln(1 + n_ab) where n_ab counts
// interactions between a and b in [as_of - window, as_of).
class InteractionGraph {
 public:
  struct Edge {
    EditorIndex neighbor;
    std::uint32_t count;
    double weight;
  };

  InteractionGraph() = default;

  std::span<const Edge> Neighbors(EditorIndex editor) const;
  double Weight(EditorIndex a, EditorIndex b) const;
  std::uint32_t Count(EditorIndex a, EditorIndex b) const;
  std::size_t EdgeCount() const { return edges_.size() / 2; }
  std::size_t EditorCount() const {
    return offsets_.empty() ? 0 : offsets_.size() - 1;
  }

 private:
  friend InteractionGraph BuildInteractionGraph(const Corpus&, Instant,
                                                std::int64_t, InteractionKindSet);
  std::vector<std::uint32_t> offsets_;
  std::vector<Edge> edges_;  // per editor, ascending by neighbor
};

InteractionGraph BuildInteractionGraph(const Corpus& corpus, Instant as_of,
                                       std::int64_t window_days,
                                       InteractionKindSet kinds = {});

}  // namespace wikirec

#endif  // WIKIREC_PROFILING_H_

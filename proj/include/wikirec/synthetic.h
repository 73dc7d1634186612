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

#ifndef WIKIREC_SYNTHETIC_H_
#define WIKIREC_SYNTHETIC_H_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wikirec/corpus.h"
#include "wikirec/evalkit.h"

namespace wikirec {

struct SyntheticParams {
  std::int64_t editor_count = 100;
  std::int64_t project_count = 5;
  std::int64_t category_count = 10;
  std::int64_t weeks = 8;
  std::uint64_t seed = 1;
};

// Reference instant all synthetic corpora end at.
Instant SyntheticAsOf();
// First instant of the simulated activity window (as_of - weeks).
Instant SyntheticWindowStart(const SyntheticParams& params);

// Deterministic corpus for a seed. A small share of veterans, a larger share
// of moderately experienced editors with a backlog of older edits, and
// newcomers registering through the window. Editors favour a few Zipf-drawn
// categories; every project has at least one member and one organizer.
// Throws std::invalid_argument unless every count is at least 1.
Corpus GenerateSynthetic(const SyntheticParams& params);

struct ImpactScenarioParams {
  std::int64_t invited = 200;
  std::int64_t controls_per_invited = 3;
  std::int64_t delta = 5;  // extra in-scope post-window edits per invited editor
  std::int64_t window_days = 28;
  std::uint64_t seed = 1;
};

struct ImpactScenario {
  Corpus corpus;
  std::vector<FeedbackRecord> feedback;
};

// One project; invited editors and controls share the same activity
// distribution, and each invited editor gets exactly `delta` additional
// in-scope edits in the post window.
ImpactScenario GenerateImpactScenario(const ImpactScenarioParams& params);

}  // namespace wikirec

#endif  // WIKIREC_SYNTHETIC_H_

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

#ifndef WIKIREC_CONFIG_H_
#define WIKIREC_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "wikirec/corpus.h"
#include "wikirec/time.h"

namespace wikirec {

// Bit set over InteractionKind.
struct InteractionKindSet {
  std::uint8_t bits = 0b111;

  bool Contains(InteractionKind k) const {
    return bits & (1u << static_cast<unsigned>(k));
  }
  bool operator==(const InteractionKindSet&) const = default;
};

// Every tunable of profiling, ranking and batching.
struct Config {
  // Experience tiers.
  std::int64_t brand_new_max_edits = 50;          // BrandNew below this
  std::int64_t brand_new_recent_days = 30;        // or registered this recently
  std::int64_t highly_experienced_min_edits = 3000;  // HighlyExperienced above
  // Quality gate.
  std::int64_t quality_evidence_floor = 10;
  double quality_cutoff = 0.5;
  // Scorers.
  std::int64_t rule_min_edits = 5;
  std::int64_t rule_window_days = 30;
  std::int64_t bonds_window_days = 180;
  InteractionKindSet bonds_kinds;
  std::int64_t coedit_top_k = 5;
  // Batching.
  std::int64_t per_cell_n = 5;
  bool allow_rerecommend = false;
  std::int64_t cadence_days = 7;
  // Evaluation.
  std::int64_t impact_window_days = 28;

  bool operator==(const Config&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

// Parses "key = value" lines; '#' starts a comment. Throws ConfigError.
KeyValues ParseKeyValues(const std::string& text);
KeyValues ReadKeyValueFile(const std::filesystem::path& path);
std::string FormatKeyValues(const KeyValues& kv);

// Applies the recognised pipeline keys in `kv` onto `base`. Unknown keys are
// ignored (they may belong to the service). Invalid values throw ConfigError.
Config ApplyConfig(Config base, const KeyValues& kv);

// All pipeline keys with their values, in a stable order.
KeyValues ConfigToKeyValues(const Config& config);

// Rejects out-of-range settings (negative windows, k < 1, ...).
void ValidateConfig(const Config& config);

}  // namespace wikirec

#endif  // WIKIREC_CONFIG_H_

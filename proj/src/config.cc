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

#include "wikirec/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace wikirec {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::int64_t ParseInt(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("config key " + key + ": expected integer, got \"" + v + "\"");
  }
  return out;
}

double ParseDouble(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": expected number, got \"" + v + "\"");
  }
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key " + key + ": expected true/false, got \"" + v + "\"");
}

InteractionKindSet ParseKinds(const std::string& key, const std::string& v) {
  InteractionKindSet set{0};
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    auto kind = ParseInteractionKind(item);
    if (!kind) throw ConfigError("config key " + key + ": unknown kind \"" + item + "\"");
    set.bits |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(*kind));
  }
  return set;
}

std::string FormatKinds(InteractionKindSet set) {
  std::string out;
  for (auto k : {InteractionKind::kTalkMessage, InteractionKind::kCoEdit,
                 InteractionKind::kThanks}) {
    if (!set.Contains(k)) continue;
    if (!out.empty()) out += ',';
    out += InteractionKindName(k);
  }
  return out;
}

std::string FormatDouble(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

KeyValues ParseKeyValues(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected key = value");
    }
    std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_number) + ": empty key");
    }
    kv[key] = Trim(std::string_view(trimmed).substr(eq + 1));
  }
  return kv;
}

KeyValues ReadKeyValueFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseKeyValues(buf.str());
}

std::string FormatKeyValues(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

Config ApplyConfig(Config c, const KeyValues& kv) {
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto set_int = [&](const char* key, std::int64_t& field) {
    if (const auto* v = get(key)) field = ParseInt(key, *v);
  };
  set_int("brand_new_max_edits", c.brand_new_max_edits);
  set_int("brand_new_recent_days", c.brand_new_recent_days);
  set_int("highly_experienced_min_edits", c.highly_experienced_min_edits);
  set_int("quality_evidence_floor", c.quality_evidence_floor);
  if (const auto* v = get("quality_cutoff")) c.quality_cutoff = ParseDouble("quality_cutoff", *v);
  set_int("rule_min_edits", c.rule_min_edits);
  set_int("rule_window_days", c.rule_window_days);
  set_int("bonds_window_days", c.bonds_window_days);
  if (const auto* v = get("bonds_kinds")) c.bonds_kinds = ParseKinds("bonds_kinds", *v);
  set_int("coedit_top_k", c.coedit_top_k);
  set_int("per_cell_n", c.per_cell_n);
  if (const auto* v = get("allow_rerecommend")) {
    c.allow_rerecommend = ParseBool("allow_rerecommend", *v);
  }
  set_int("cadence_days", c.cadence_days);
  set_int("impact_window_days", c.impact_window_days);
  ValidateConfig(c);
  return c;
}

KeyValues ConfigToKeyValues(const Config& c) {
  return {
      {"brand_new_max_edits", std::to_string(c.brand_new_max_edits)},
      {"brand_new_recent_days", std::to_string(c.brand_new_recent_days)},
      {"highly_experienced_min_edits", std::to_string(c.highly_experienced_min_edits)},
      {"quality_evidence_floor", std::to_string(c.quality_evidence_floor)},
      {"quality_cutoff", FormatDouble(c.quality_cutoff)},
      {"rule_min_edits", std::to_string(c.rule_min_edits)},
      {"rule_window_days", std::to_string(c.rule_window_days)},
      {"bonds_window_days", std::to_string(c.bonds_window_days)},
      {"bonds_kinds", FormatKinds(c.bonds_kinds)},
      {"coedit_top_k", std::to_string(c.coedit_top_k)},
      {"per_cell_n", std::to_string(c.per_cell_n)},
      {"allow_rerecommend", c.allow_rerecommend ? "true" : "false"},
      {"cadence_days", std::to_string(c.cadence_days)},
      {"impact_window_days", std::to_string(c.impact_window_days)},
  };
}

void ValidateConfig(const Config& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid config: ") + what);
  };
  require(c.brand_new_max_edits >= 0, "brand_new_max_edits must be >= 0");
  require(c.brand_new_recent_days >= 0, "brand_new_recent_days must be >= 0");
  require(c.highly_experienced_min_edits >= 0, "highly_experienced_min_edits must be >= 0");
  require(c.quality_evidence_floor >= 0, "quality_evidence_floor must be >= 0");
  require(c.quality_cutoff >= 0.0 && c.quality_cutoff <= 1.0,
          "quality_cutoff must lie in [0, 1]");
  require(c.rule_min_edits >= 0, "rule_min_edits must be >= 0");
  require(c.rule_window_days >= 1, "rule_window_days must be >= 1");
  require(c.bonds_window_days >= 1, "bonds_window_days must be >= 1");
  require(c.coedit_top_k >= 1, "coedit_top_k must be >= 1");
  require(c.per_cell_n >= 1, "per_cell_n must be >= 1");
  require(c.cadence_days >= 1, "cadence_days must be >= 1");
  require(c.impact_window_days >= 1, "impact_window_days must be >= 1");
}

}  // namespace wikirec

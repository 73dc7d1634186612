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

#ifndef WIKIREC_JSONL_H_
#define WIKIREC_JSONL_H_

// Helpers for line-delimited JSON files: one object per line, UTF-8.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wikirec/time.h"

namespace wikirec {

using Json = nlohmann::json;

// A schema violation on one line. `field` is empty when the line is not JSON.
class RecordError : public std::runtime_error {
 public:
  RecordError(std::string field, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Calls `fn(object, line_number)` for every non-blank line. Lines that are not
// JSON objects raise RecordError with an empty field name.
void ForEachJsonLine(const std::filesystem::path& path,
                     const std::function<void(const Json&, std::size_t)>& fn);

// Typed field accessors; each raises RecordError naming the field.
const std::string& RequireString(const Json& obj, const char* field);
bool RequireBool(const Json& obj, const char* field);
std::int64_t RequireInt(const Json& obj, const char* field);
double RequireNumber(const Json& obj, const char* field);
Instant RequireInstant(const Json& obj, const char* field);
std::vector<std::string> RequireStringArray(const Json& obj, const char* field);

// Serializes one object per line.
std::string ToJsonLine(const Json& obj);

}  // namespace wikirec

#endif  // WIKIREC_JSONL_H_

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

#include "wikirec/jsonl.h"

#include <fstream>

namespace wikirec {

void ForEachJsonLine(const std::filesystem::path& path,
                     const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json obj = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw RecordError({}, "line " + std::to_string(line_number) +
                                " is not a JSON object");
    }
    try {
      fn(obj, line_number);
    } catch (const RecordError& e) {
      throw RecordError(e.field(), "line " + std::to_string(line_number) +
                                       ": " + e.what());
    }
  }
}

namespace {

const Json& Field(const Json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw RecordError(field, std::string("missing field \"") + field + "\"");
  }
  return *it;
}

[[noreturn]] void WrongType(const char* field, const char* expected) {
  throw RecordError(field, std::string("field \"") + field + "\" must be " +
                               expected);
}

}  // namespace

const std::string& RequireString(const Json& obj, const char* field) {
  const Json& v = Field(obj, field);
  if (!v.is_string()) WrongType(field, "a string");
  return v.get_ref<const std::string&>();
}

bool RequireBool(const Json& obj, const char* field) {
  const Json& v = Field(obj, field);
  if (!v.is_boolean()) WrongType(field, "a boolean");
  return v.get<bool>();
}

std::int64_t RequireInt(const Json& obj, const char* field) {
  const Json& v = Field(obj, field);
  if (!v.is_number_integer()) WrongType(field, "an integer");
  return v.get<std::int64_t>();
}

double RequireNumber(const Json& obj, const char* field) {
  const Json& v = Field(obj, field);
  if (!v.is_number()) WrongType(field, "a number");
  return v.get<double>();
}

Instant RequireInstant(const Json& obj, const char* field) {
  const std::string& s = RequireString(obj, field);
  try {
    return ParseInstant(s);
  } catch (const std::invalid_argument& e) {
    throw RecordError(field, std::string("field \"") + field + "\": " + e.what());
  }
}

std::vector<std::string> RequireStringArray(const Json& obj, const char* field) {
  const Json& v = Field(obj, field);
  if (!v.is_array()) WrongType(field, "an array of strings");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& item : v) {
    if (!item.is_string()) WrongType(field, "an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string ToJsonLine(const Json& obj) {
  std::string s = obj.dump();
  s.push_back('\n');
  return s;
}

}  // namespace wikirec

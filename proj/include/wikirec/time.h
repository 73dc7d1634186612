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

#ifndef WIKIREC_TIME_H_
#define WIKIREC_TIME_H_

#include <chrono>
#include <string>
#include <string_view>

namespace wikirec {

// All trace timestamps are UTC with second precision.
using Instant = std::chrono::sys_seconds;

constexpr std::chrono::seconds Days(long long n) {
  return std::chrono::seconds(n * 86400);
}

// Parses "YYYY-MM-DDTHH:MM:SSZ" (a "+00:00" suffix is also accepted).
// Throws std::invalid_argument on anything else.
Instant ParseInstant(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string FormatInstant(Instant t);

}  // namespace wikirec

#endif  // WIKIREC_TIME_H_

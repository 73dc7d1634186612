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

#ifndef WIKIREC_STATS_H_
#define WIKIREC_STATS_H_

#include <span>
#include <stdexcept>

namespace wikirec::stats {

class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// I_x(a, b) for a, b > 0 and x in [0, 1], by Lentz's continued fraction.
double RegularizedIncompleteBeta(double a, double b, double x);

// CDF of Student's t with `df` > 0 degrees of freedom (df need not be integral).
double StudentTCdf(double t, double df);

// P(|T| >= |t|) for T ~ t(df).
double StudentTTwoSidedP(double t, double df);

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased (n - 1 denominator)
  std::size_t n = 0;
};

SampleMoments Moments(std::span<const double> sample);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

// Welch's unequal-variance two-sample t test (two-sided). Requires n >= 2 in
// both samples and a nonzero variance in at least one.
WelchResult WelchTTest(std::span<const double> a, std::span<const double> b);

}  // namespace wikirec::stats

#endif  // WIKIREC_STATS_H_

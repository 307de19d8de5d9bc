// Copyright (c) 2026 aqa-eval authors
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

#ifndef AQA_STATS_H_
#define AQA_STATS_H_

#include <span>
#include <vector>

#include "aqa/scoring.h"

namespace aqa {

// Correlations take two equal-length series of at least two finite values.
// A zero-variance series (or a zero tie-corrected denominator) raises
// kConstantSeries rather than returning NaN.
double Pearson(std::span<const double> xs, std::span<const double> ys);
double Spearman(std::span<const double> xs, std::span<const double> ys);
double KendallTauB(std::span<const double> xs, std::span<const double> ys);

// 1-based ranks; tied values share the mean of the positions they occupy.
std::vector<double> AverageRanks(std::span<const double> values);

// Mann-Whitney AUC: fraction of (positive, negative) pairs where the positive
// scores higher, ties counting one half. Raises kSingleClass when either class
// is empty.
double RocAuc(std::span<const int> labels, std::span<const double> scores);

enum class HumanChoice { kFirst, kSecond };

struct PreferenceOutcome {
  Preference predicted = Preference::kTie;
  HumanChoice human = HumanChoice::kFirst;
};

// (matches + tie_credit * ties) / n.
double PairAccuracy(std::span<const PreferenceOutcome> outcomes, double tie_credit = 0.5);

struct CompaScores {
  double text_pct = 0.0;
  double audio_pct = 0.0;
  double group_pct = 0.0;
};

CompaScores ComputeCompaScores(std::span<const CompaGroupResult> results);

struct SweepSummary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  int n_templates = 0;
};

SweepSummary Summarize(std::span<const double> values);

}  // namespace aqa

#endif  // AQA_STATS_H_

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

#ifndef AQA_SCORING_H_
#define AQA_SCORING_H_

#include <array>
#include <string>

namespace aqa {

// Log-likelihoods of the "Yes" and "No" answers for one audio/question pair.
// Backends may return unnormalized logits; only the difference matters.
class YesNoLogProbs {
 public:
  // Throws Error(kInvalidLogProb) on NaN or infinite input.
  YesNoLogProbs(double s_yes, double s_no);

  double s_yes() const { return s_yes_; }
  double s_no() const { return s_no_; }

  bool operator==(const YesNoLogProbs&) const = default;

 private:
  double s_yes_;
  double s_no_;
};

struct AlignmentScore {
  double value = 0.0;  // in [0, 1]
  std::string backend_id;
  std::string template_id;
  std::string digest;  // hex cache key of the originating request
};

enum class Preference { kFirst, kSecond, kTie };

const char* PreferenceName(Preference p);

struct CompaGroupResult {
  bool text_ok = false;
  bool audio_ok = false;
  bool group_ok = false;

  bool operator==(const CompaGroupResult&) const = default;
};

// scores[i][j] = score(audio_i, text_j); text_i is the correct caption of audio_i.
using ScoreGrid = std::array<std::array<double, 2>, 2>;

// Softmax probability of Yes against No, evaluated as 1 / (1 + exp(s_no - s_yes)).
double AqaScore(const YesNoLogProbs& lp);
double AqaScore(double s_yes, double s_no);

// Strict comparison; exact equality is a tie. Throws kInvalidScore on
// non-finite input.
Preference Prefer(double score_first, double score_second);

// Text direction: each audio ranks its own caption above the other one.
// Audio direction: each caption ranks its own audio above the other one.
CompaGroupResult CompaGroupEval(const ScoreGrid& scores);

}  // namespace aqa

#endif  // AQA_SCORING_H_

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

#include "aqa/scoring.h"

#include <cmath>

#include "aqa/error.h"

namespace aqa {
namespace {

void CheckScore(double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidScore, "score must be finite");
  }
}

}  // namespace

YesNoLogProbs::YesNoLogProbs(double s_yes, double s_no) : s_yes_(s_yes), s_no_(s_no) {
  if (!std::isfinite(s_yes) || !std::isfinite(s_no)) {
    throw Error(ErrorCode::kInvalidLogProb, "log-probabilities must be finite");
  }
}

double AqaScore(const YesNoLogProbs& lp) {
  // exp() overflows to +inf for large differences, which still yields 0.
  return 1.0 / (1.0 + std::exp(lp.s_no() - lp.s_yes()));
}

double AqaScore(double s_yes, double s_no) {
  return AqaScore(YesNoLogProbs(s_yes, s_no));
}

const char* PreferenceName(Preference p) {
  switch (p) {
    case Preference::kFirst: return "first";
    case Preference::kSecond: return "second";
    case Preference::kTie: return "tie";
  }
  return "tie";
}

Preference Prefer(double score_first, double score_second) {
  CheckScore(score_first);
  CheckScore(score_second);
  if (score_first > score_second) return Preference::kFirst;
  if (score_second > score_first) return Preference::kSecond;
  return Preference::kTie;
}

CompaGroupResult CompaGroupEval(const ScoreGrid& s) {
  for (const auto& row : s) {
    for (double v : row) CheckScore(v);
  }
  CompaGroupResult r;
  r.text_ok = s[0][0] > s[0][1] && s[1][1] > s[1][0];
  r.audio_ok = s[0][0] > s[1][0] && s[1][1] > s[0][1];
  r.group_ok = r.text_ok && r.audio_ok;
  return r;
}

}  // namespace aqa

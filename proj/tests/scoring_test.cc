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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "test_util.h"

namespace aqa {
namespace {

using testing::CodeOf;

TEST(AqaScoreTest, SymmetricLogProbsGiveOneHalf) { EXPECT_EQ(AqaScore(0.0, 0.0), 0.5); }

TEST(AqaScoreTest, LogThreeAgainstZeroIsThreeQuarters) {
  // 3 / (3 + 1) in exact arithmetic.
  EXPECT_NEAR(AqaScore(std::log(3.0), 0.0), 3.0 / 4.0, 1e-15);
}

TEST(AqaScoreTest, VeryNegativeYesUnderflowsCleanly) {
  const double v = AqaScore(-1000.0, 0.0);
  // Extended-precision oracle: e^-1000 / (1 + e^-1000), about 5.08e-435.
  const long double e = std::exp(-1000.0L);
  const long double oracle = e / (1.0L + e);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GE(v, 0.0);
  EXPECT_LE(v, 1e-300);
  EXPECT_EQ(v, static_cast<double>(oracle));
  EXPECT_EQ(AqaScore(0.0, -1000.0), 1.0);
}

TEST(AqaScoreTest, ExtremeMagnitudesStayInRange) {
  const double big = std::numeric_limits<double>::max();
  EXPECT_EQ(AqaScore(big, -big), 1.0);
  EXPECT_EQ(AqaScore(-big, big), 0.0);
  EXPECT_EQ(AqaScore(big, big), 0.5);
}

TEST(AqaScoreTest, RejectsNonFiniteInput) {
  const double nan = std::nan("");
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(CodeOf([&] { YesNoLogProbs(nan, 0.0); }), ErrorCode::kInvalidLogProb);
  EXPECT_EQ(CodeOf([&] { YesNoLogProbs(0.0, -inf); }), ErrorCode::kInvalidLogProb);
  EXPECT_EQ(CodeOf([&] { AqaScore(inf, 0.0); }), ErrorCode::kInvalidLogProb);
}

TEST(AqaScoreTest, ComplementShiftAndMonotonicity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lp(-60.0, 60.0);
  std::uniform_real_distribution<double> shift(-500.0, 500.0);
  for (int i = 0; i < 5000; ++i) {
    const double x = lp(rng), y = lp(rng), c = shift(rng);
    EXPECT_NEAR(AqaScore(x, y) + AqaScore(y, x), 1.0, 1e-12);
    EXPECT_NEAR(AqaScore(x + c, y + c), AqaScore(x, y), 1e-12);
    const double d = 1e-3;
    EXPECT_GE(AqaScore(x + d, y), AqaScore(x, y));
    EXPECT_LE(AqaScore(x, y + d), AqaScore(x, y));
    // Above 0.5 the double result rounds to 1 for large margins, so strictness
    // is checked on whichever of score and complement is the small side.
    if (AqaScore(x, y) <= 0.5) {
      EXPECT_GT(AqaScore(x + d, y), AqaScore(x, y)) << x << " " << y;
      EXPECT_LT(AqaScore(x, y + d), AqaScore(x, y)) << x << " " << y;
    } else {
      EXPECT_LT(AqaScore(y, x + d), AqaScore(y, x)) << x << " " << y;
      EXPECT_GT(AqaScore(y + d, x), AqaScore(y, x)) << x << " " << y;
    }
  }
}

TEST(PreferTest, StrictComparison) {
  EXPECT_EQ(Prefer(0.7, 0.3), Preference::kFirst);
  EXPECT_EQ(Prefer(0.5, 0.5), Preference::kTie);
  EXPECT_EQ(Prefer(0.3, 0.3000001), Preference::kSecond);
  EXPECT_EQ(Prefer(0.0, -0.0), Preference::kTie);
  EXPECT_EQ(Prefer(0.5, std::nextafter(0.5, 1.0)), Preference::kSecond);
}

TEST(PreferTest, RejectsNonFinite) {
  EXPECT_EQ(CodeOf([] { Prefer(std::nan(""), 0.1); }), ErrorCode::kInvalidScore);
  EXPECT_EQ(CodeOf([] { Prefer(0.1, std::numeric_limits<double>::infinity()); }),
            ErrorCode::kInvalidScore);
}

TEST(PreferTest, Antisymmetric) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> small(0, 4);
  for (int i = 0; i < 2000; ++i) {
    const double a = small(rng) / 4.0, b = small(rng) / 4.0;
    const Preference ab = Prefer(a, b), ba = Prefer(b, a);
    if (ab == Preference::kFirst) EXPECT_EQ(ba, Preference::kSecond);
    if (ab == Preference::kSecond) EXPECT_EQ(ba, Preference::kFirst);
    if (ab == Preference::kTie) EXPECT_EQ(ba, Preference::kTie);
    EXPECT_EQ(Prefer(a, a), Preference::kTie);
  }
}

TEST(CompaGroupEvalTest, HandCases) {
  EXPECT_EQ(CompaGroupEval({{{0.9, 0.1}, {0.2, 0.8}}}), (CompaGroupResult{true, true, true}));
  EXPECT_EQ(CompaGroupEval({{{0.5, 0.5}, {0.5, 0.5}}}), (CompaGroupResult{false, false, false}));
  EXPECT_EQ(CompaGroupEval({{{0.9, 0.2}, {0.85, 0.8}}}), (CompaGroupResult{false, true, false}));
}

TEST(CompaGroupEvalTest, RejectsNonFinite) {
  EXPECT_EQ(CodeOf([] { CompaGroupEval({{{0.9, std::nan("")}, {0.2, 0.8}}}); }),
            ErrorCode::kInvalidScore);
}

TEST(CompaGroupEvalTest, SwapAndMonotoneInvariance) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> level(0, 5);  // coarse grid so ties occur
  for (int i = 0; i < 10000; ++i) {
    ScoreGrid s;
    for (auto& row : s) {
      for (double& v : row) v = level(rng) / 5.0;
    }
    const CompaGroupResult r = CompaGroupEval(s);
    EXPECT_EQ(r.group_ok, r.text_ok && r.audio_ok);
    const ScoreGrid swapped = {{{s[1][1], s[1][0]}, {s[0][1], s[0][0]}}};
    EXPECT_EQ(CompaGroupEval(swapped), r);
    ScoreGrid logistic, affine;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        logistic[a][b] = 1.0 / (1.0 + std::exp(-8.0 * s[a][b]));
        affine[a][b] = 3.0 * s[a][b] + 2.0;
      }
    }
    EXPECT_EQ(CompaGroupEval(logistic), r);
    EXPECT_EQ(CompaGroupEval(affine), r);
  }
}

}  // namespace
}  // namespace aqa

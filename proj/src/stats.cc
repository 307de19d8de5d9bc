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

#include "aqa/stats.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "aqa/error.h"

namespace aqa {
namespace {

void CheckPaired(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::kLengthMismatch, "series lengths differ");
  }
  if (xs.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "correlation needs at least two points");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw Error(ErrorCode::kInvalidScore, "series contains a non-finite value");
    }
  }
}

bool IsConstant(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sum of t(t-1)/2 over runs of equal keys in sorted order.
template <typename Eq>
std::int64_t TiedPairs(const std::vector<std::size_t>& order, Eq eq) {
  std::int64_t total = 0, run = 1;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    if (i < order.size() && eq(order[i - 1], order[i])) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Stable merge sort of idx by ys, returning the number of inversions.
std::int64_t SortCountingSwaps(std::vector<std::size_t>& idx, std::span<const double> ys) {
  std::vector<std::size_t> buf(idx.size());
  std::int64_t swaps = 0;
  for (std::size_t width = 1; width < idx.size(); width *= 2) {
    for (std::size_t lo = 0; lo < idx.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, idx.size());
      const std::size_t hi = std::min(lo + 2 * width, idx.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (ys[idx[j]] < ys[idx[i]]) {
          swaps += static_cast<std::int64_t>(mid - i);
          buf[k++] = idx[j++];
        } else {
          buf[k++] = idx[i++];
        }
      }
      while (i < mid) buf[k++] = idx[i++];
      while (j < hi) buf[k++] = idx[j++];
    }
    idx.swap(buf);
  }
  return swaps;
}

}  // namespace

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  CheckPaired(xs, ys);
  if (IsConstant(xs) || IsConstant(ys)) {
    throw Error(ErrorCode::kConstantSeries, "Pearson undefined for a constant series");
  }
  const double mx = Mean(xs), my = Mean(ys);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw Error(ErrorCode::kConstantSeries, "Pearson undefined for a constant series");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i+1 .. j share their mean.
    const double rank = static_cast<double>(i + 1 + j) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double Spearman(std::span<const double> xs, std::span<const double> ys) {
  CheckPaired(xs, ys);
  const auto rx = AverageRanks(xs);
  const auto ry = AverageRanks(ys);
  return Pearson(rx, ry);
}

double KendallTauB(std::span<const double> xs, std::span<const double> ys) {
  CheckPaired(xs, ys);
  const std::size_t n = xs.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return xs[a] < xs[b] || (xs[a] == xs[b] && ys[a] < ys[b]);
  });
  const std::int64_t tied_x = TiedPairs(idx, [&](auto a, auto b) { return xs[a] == xs[b]; });
  const std::int64_t tied_xy =
      TiedPairs(idx, [&](auto a, auto b) { return xs[a] == xs[b] && ys[a] == ys[b]; });
  const std::int64_t swaps = SortCountingSwaps(idx, ys);
  const std::int64_t tied_y = TiedPairs(idx, [&](auto a, auto b) { return ys[a] == ys[b]; });

  const auto n0 = static_cast<std::int64_t>(n * (n - 1) / 2);
  // Pairs neither tied in x nor in y split into concordant and discordant;
  // the x-sorted order leaves exactly the discordant ones inverted in y.
  const std::int64_t untied = n0 - tied_x - tied_y + tied_xy;
  const std::int64_t c_minus_d = untied - 2 * swaps;
  const std::int64_t denom_x = n0 - tied_x, denom_y = n0 - tied_y;
  if (denom_x == 0 || denom_y == 0) {
    throw Error(ErrorCode::kConstantSeries, "Kendall tau-b undefined for a constant series");
  }
  return static_cast<double>(c_minus_d) /
         std::sqrt(static_cast<double>(denom_x) * static_cast<double>(denom_y));
}

double RocAuc(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) {
    throw Error(ErrorCode::kLengthMismatch, "labels and scores differ in length");
  }
  std::int64_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    }
    if (!std::isfinite(scores[i])) {
      throw Error(ErrorCode::kInvalidScore, "scores must be finite");
    }
    (labels[i] == 1 ? pos : neg) += 1;
  }
  if (pos == 0 || neg == 0) {
    throw Error(ErrorCode::kSingleClass, "AUC needs both positive and negative labels");
  }
  const auto ranks = AverageRanks(scores);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) rank_sum += ranks[i];
  }
  // U = wins + ties/2 over all positive-negative pairs.
  const double u = rank_sum - static_cast<double>(pos) * static_cast<double>(pos + 1) / 2.0;
  return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

double PairAccuracy(std::span<const PreferenceOutcome> outcomes, double tie_credit) {
  if (outcomes.empty()) throw Error(ErrorCode::kEmptyList, "no preference outcomes");
  if (!(tie_credit >= 0.0 && tie_credit <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tie credit must lie in [0, 1]");
  }
  std::int64_t matches = 0, ties = 0;
  for (const auto& o : outcomes) {
    if (o.predicted == Preference::kTie) {
      ++ties;
    } else if ((o.predicted == Preference::kFirst) == (o.human == HumanChoice::kFirst)) {
      ++matches;
    }
  }
  return (static_cast<double>(matches) + tie_credit * static_cast<double>(ties)) /
         static_cast<double>(outcomes.size());
}

CompaScores ComputeCompaScores(std::span<const CompaGroupResult> results) {
  if (results.empty()) throw Error(ErrorCode::kEmptyList, "no CompA groups");
  std::int64_t text = 0, audio = 0, group = 0;
  for (const auto& r : results) {
    text += r.text_ok;
    audio += r.audio_ok;
    group += r.group_ok;
  }
  const auto n = static_cast<double>(results.size());
  return {100.0 * static_cast<double>(text) / n, 100.0 * static_cast<double>(audio) / n,
          100.0 * static_cast<double>(group) / n};
}

SweepSummary Summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyList, "no sweep values");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidScore, "sweep value not finite");
  }
  const int n = static_cast<int>(values.size());
  // Summation error would otherwise leave a residual spread on identical values.
  if (IsConstant(values)) return {values[0], 0.0, n};
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(n)), n};
}

}  // namespace aqa

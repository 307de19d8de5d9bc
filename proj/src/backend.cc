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

#include "aqa/backend.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "aqa/error.h"

namespace aqa {

void BackendDescriptor::Validate() const {
  if (backend_id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "backend_id must be non-empty");
  }
  if (yes_forms.empty() || no_forms.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "yes/no surface forms must be non-empty");
  }
  std::set<std::string> yes(yes_forms.begin(), yes_forms.end());
  for (const auto& f : no_forms) {
    if (yes.contains(f)) {
      throw Error(ErrorCode::kInvalidArgument, "surface form '" + f + "' is both yes and no");
    }
  }
  if (decoding.max_new_tokens < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_new_tokens must be >= 1");
  }
}

nlohmann::json BackendDescriptor::ToJson() const {
  return nlohmann::json{{"backend_id", backend_id},
                        {"endpoint", endpoint},
                        {"yes_forms", yes_forms},
                        {"no_forms", no_forms},
                        {"decoding",
                         {{"greedy", decoding.greedy},
                          {"max_new_tokens", decoding.max_new_tokens}}}};
}

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  double sum = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kProtocolViolation, "embedding has non-finite entries");
    }
    sum += v * v;
  }
  norm_ = std::sqrt(sum);
}

double ClapScore(const EmbeddingVector& audio, const EmbeddingVector& text) {
  if (audio.size() != text.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "embedding sizes differ: " +
                                                   std::to_string(audio.size()) + " vs " +
                                                   std::to_string(text.size()));
  }
  if (!(audio.norm() > 0.0) || !(text.norm() > 0.0)) {
    throw Error(ErrorCode::kZeroNorm, "embedding has zero norm");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < audio.size(); ++i) {
    dot += audio.values()[i] * text.values()[i];
  }
  const double c = dot / (audio.norm() * text.norm());
  return std::clamp(c, -1.0, 1.0);
}

std::size_t CountWords(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

}  // namespace aqa

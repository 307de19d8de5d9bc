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

#ifndef AQA_BACKEND_H_
#define AQA_BACKEND_H_

#include <string>
#include <vector>

#include "aqa/audio.h"
#include "aqa/prompt_registry.h"
#include "aqa/scoring.h"
#include "json.hpp"

namespace aqa {

struct DecodingConfig {
  bool greedy = true;
  int max_new_tokens = 512;
};

// Identity and answer-token configuration of an inference backend.
struct BackendDescriptor {
  std::string backend_id = "mock";
  std::string endpoint = "mock";  // "mock" or an http(s) base URL
  std::vector<std::string> yes_forms{"Yes", "yes", " Yes", " yes"};
  std::vector<std::string> no_forms{"No", "no", " No", " no"};
  DecodingConfig decoding;

  bool is_mock() const { return endpoint == "mock"; }
  // Surface-form lists must be non-empty and disjoint; max_new_tokens >= 1.
  void Validate() const;
  nlohmann::json ToJson() const;
};

class EmbeddingVector {
 public:
  explicit EmbeddingVector(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double norm() const { return norm_; }

 private:
  std::vector<double> values_;
  double norm_;
};

// Cosine similarity dot(a, t) / (|a| |t|). Throws kDimensionMismatch or kZeroNorm.
double ClapScore(const EmbeddingVector& audio, const EmbeddingVector& text);

struct YesNoRequest {
  const AudioRef* audio = nullptr;
  RenderedPrompt prompt;
  std::vector<std::string> yes_forms;
  std::vector<std::string> no_forms;
};

enum class EmbedKind { kAudio, kText };

struct EmbedRequest {
  EmbedKind kind = EmbedKind::kText;
  const AudioRef* audio = nullptr;
  std::string text;
  std::string model_id;
};

struct GenerateRequest {
  // Zero audios for text-only judging, two for clip comparisons.
  std::vector<const AudioRef*> audios;
  RenderedPrompt prompt;
  int max_new_tokens = 512;
};

// One inference provider. Implementations must be safe to call concurrently.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual YesNoLogProbs YesNo(const YesNoRequest& request) = 0;
  virtual std::vector<double> Embed(const EmbedRequest& request) = 0;
  virtual std::string Generate(const GenerateRequest& request) = 0;
};

// Whitespace-delimited word count; a lower bound on the token count of any
// subword tokenizer, used to police max_new_tokens on untrusted responses.
std::size_t CountWords(std::string_view text);

}  // namespace aqa

#endif  // AQA_BACKEND_H_

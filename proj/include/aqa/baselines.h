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

#ifndef AQA_BASELINES_H_
#define AQA_BASELINES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aqa/benchmark.h"
#include "aqa/error.h"
#include "aqa/gateway.h"
#include "aqa/prompt_registry.h"

namespace aqa {

struct ParsedRating {
  double value = 0.0;
  Scale scale;
};

enum class ChoiceKind { kCaption12, kAudioFirstSecond, kPreferredRejected };

enum class ParsedChoice { kFirst, kSecond, kPreferred, kRejected };

const char* ParsedChoiceName(ParsedChoice choice);

// Finds every "Score: <number>" (case-insensitive key, optional whitespace
// around the colon, integer or decimal) and keeps the last one. Throws
// kNoMatch or kOutOfScale; never anything else for any input bytes.
ParsedRating ParseScore(std::string_view response, Scale scale);

// Last labeled answer of the given kind wins:
//   kCaption12         "Better Caption: <1 or 2>"
//   kAudioFirstSecond  "Better Match: <first audio or second audio>"
//   kPreferredRejected "Answer: ..." or "Decision: <preferred or rejected>"
// Key and value are case-insensitive. Throws kNoMatch, or kAmbiguousValue
// when the value is not one of the admissible options.
ParsedChoice ParseChoice(std::string_view response, ChoiceKind kind);

// Canonical answer strings, the inverse of the parsers.
std::string FormatScore(double value);
std::string FormatChoice(ChoiceKind kind, ParsedChoice choice);
std::vector<ParsedChoice> AdmissibleChoices(ChoiceKind kind);

enum class BaselineMode { kRate, kPairChoose, kAcceptReject };

const char* BaselineModeName(BaselineMode mode);

// The mode an instance kind calls for. CompA groups have none and raise
// kIncompatibleMethod.
BaselineMode ModeFor(const BenchmarkInstance& instance);

struct BaselineOutcome {
  // Set on success; exactly one of rating / choice is populated.
  std::optional<double> rating;
  std::optional<ParsedChoice> choice;
  // Set when the judge's answer could not be used. Never imputed.
  std::optional<ErrorCode> failure;
  std::string failure_message;
  std::string template_id;
  std::string response;               // raw judge output
  std::vector<std::string> captions;  // cascade stage-1 captions, in audio order

  bool ok() const { return !failure.has_value(); }
};

// family selects the instruction template (relate, pam, relate-pair,
// baton-pair, baton, fense, brace). Backend errors propagate; parse errors
// are recorded in the outcome.
BaselineOutcome RunPromptingBaseline(Gateway& gateway, const PromptRegistry& registry,
                                     const BenchmarkInstance& instance, std::string_view family,
                                     BaselineMode mode);

// Stage 1 captions every audio with the captioning prompt; stage 2 judges the
// caption(s) as text. Backend errors surface as kStage1Failure or
// kStage2Failure.
BaselineOutcome RunCascadeBaseline(Gateway& gateway, const PromptRegistry& registry,
                                   const BenchmarkInstance& instance, std::string_view family,
                                   BaselineMode mode);

}  // namespace aqa

#endif  // AQA_BASELINES_H_

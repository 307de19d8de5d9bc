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

#ifndef AQA_BENCHMARK_H_
#define AQA_BENCHMARK_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aqa/audio.h"
#include "aqa/error.h"
#include "aqa/stats.h"
#include "json.hpp"

namespace aqa {

struct Scale {
  double min = 0.0;
  double max = 10.0;
};

struct RatingInstance {
  std::string id;
  AudioRef audio;
  std::string text;
  std::vector<double> ratings;
  Scale scale;
  std::string family;  // "relate" / "pam"; empty when not inferable
};

enum class PairSource { kRelatePair, kBatonPair };

struct AudioPairInstance {
  std::string id;
  std::string text;
  AudioRef audio_first;
  AudioRef audio_second;
  HumanChoice preference = HumanChoice::kFirst;
  PairSource source = PairSource::kRelatePair;
  std::optional<int> event_count;
};

enum class TextPairSubset { kHC, kHI, kHM, kMM, kHH, kHallucination };

struct TextPairInstance {
  std::string id;
  AudioRef audio;
  std::string text_first;
  std::string text_second;
  HumanChoice preference = HumanChoice::kFirst;
  TextPairSubset subset = TextPairSubset::kHC;
  std::string family;  // "fense" / "brace"
};

enum class FeedbackLabel { kPreferred, kRejected };

struct BinaryFeedbackInstance {
  std::string id;
  AudioRef audio;
  std::string text;
  FeedbackLabel label = FeedbackLabel::kPreferred;
  int event_count = 2;
};

enum class CompaTask { kOrder, kAttribute };

// text_i is the correct caption for audio_i.
struct CompaGroup {
  std::string id;
  AudioRef audio_1;
  AudioRef audio_2;
  std::string text_1;
  std::string text_2;
  CompaTask task = CompaTask::kOrder;
};

using BenchmarkInstance = std::variant<RatingInstance, AudioPairInstance, TextPairInstance,
                                       BinaryFeedbackInstance, CompaGroup>;

enum class ManifestKind { kRating, kAudioPair, kTextPair, kBinaryFeedback, kCompaGroup, kMixed };

ManifestKind ParseManifestKind(std::string_view name);  // throws kUnknownKind
const char* ManifestKindName(ManifestKind kind);
ManifestKind KindOf(const BenchmarkInstance& instance);

const char* SubsetName(TextPairSubset subset);
const char* PairSourceName(PairSource source);
const char* CompaTaskName(CompaTask task);

struct ManifestEntry {
  int line_no = 0;
  BenchmarkInstance instance;
};

// MalformedLine / SchemaViolation carry the 1-based line and offending field.
class ManifestError : public Error {
 public:
  ManifestError(ErrorCode code, int line_no, std::string field, const std::string& message)
      : Error(code, "line " + std::to_string(line_no) +
                        (field.empty() ? "" : " field '" + field + "'") + ": " + message),
        line_no_(line_no),
        field_(std::move(field)) {}

  int line_no() const { return line_no_; }
  const std::string& field() const { return field_; }

 private:
  int line_no_;
  std::string field_;
};

struct LoadOptions {
  // Read every referenced audio file and record its digest. Annotation-only
  // workflows (pair conversion) turn this off.
  bool load_audio = true;
};

// One JSON object per line; blank lines are skipped. With kMixed every line's
// own "kind" is used; otherwise lines of another kind are a SchemaViolation.
// Relative audio paths resolve against the manifest's directory.
std::vector<ManifestEntry> LoadManifest(const std::filesystem::path& path, ManifestKind kind,
                                        const LoadOptions& options = {});
std::vector<ManifestEntry> ParseManifest(std::string_view text, ManifestKind kind,
                                         const std::filesystem::path& base_dir,
                                         const LoadOptions& options = {});

// Arithmetic mean of the raw ratings.
double RelateAggregate(const RatingInstance& instance);

// Within each text-prompt group, every clip pair whose aggregated ratings
// differ by strictly more than threshold; the preference points at the
// higher-rated clip and slot order is drawn from a seeded generator.
std::vector<AudioPairInstance> BuildRelatePairs(std::span<const RatingInstance> instances,
                                                double threshold, std::uint64_t shuffle_seed);

// Every Preferred x Rejected combination within each (text, event_count) group.
std::vector<AudioPairInstance> BuildBatonPairs(std::span<const BinaryFeedbackInstance> feedback,
                                               std::uint64_t shuffle_seed);

nlohmann::json ToManifestJson(const AudioPairInstance& pair);
std::string ToManifestText(std::span<const AudioPairInstance> pairs);

}  // namespace aqa

#endif  // AQA_BENCHMARK_H_

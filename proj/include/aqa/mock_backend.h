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

#ifndef AQA_MOCK_BACKEND_H_
#define AQA_MOCK_BACKEND_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>

#include "aqa/backend.h"

namespace aqa {

// Deterministic stand-in for a model server. Audio ids are content digests.
struct MockOracleConfig {
  std::uint64_t seed = 0;
  // (audio id, text id) -> P(yes), strictly inside (0, 1). The text id is the
  // rendered prompt's subject: the description, or "d1\nd2" for pairwise.
  std::map<std::pair<std::string, std::string>, double> planted;
  // (audio id, template id) -> canned generation.
  std::map<std::pair<std::string, std::string>, std::string> planted_generations;
  int embedding_dim = 16;

  void Validate() const;
  // Stable fingerprint for config digests.
  std::string Digest() const;
};

// JSON form:
//   {"seed": 7,
//    "planted": [{"audio": "a.wav", "text": "...", "p": 0.8}, ...],
//    "generations": [{"audio": "a.wav", "template": "prompting.rate.relate",
//                     "text": "Score: 7"}, ...]}
// Audio paths are resolved relative to the file and replaced by digests.
MockOracleConfig LoadMockConfig(const std::filesystem::path& path);

// Planted entries return (ln p, ln(1 - p)). Otherwise p comes from a 64-bit
// hash of (seed, audio_id, prompt_text) mapped into [0.050001, 0.949999]
// with a single integer-to-double division.
YesNoLogProbs MockYesNo(const MockOracleConfig& cfg, const std::string& audio_id,
                        const std::string& text_id, const std::string& prompt_text);

double MockProbability(std::uint64_t seed, const std::string& audio_id,
                       const std::string& prompt_text);

class MockBackend : public Backend {
 public:
  explicit MockBackend(MockOracleConfig cfg);

  YesNoLogProbs YesNo(const YesNoRequest& request) override;
  std::vector<double> Embed(const EmbedRequest& request) override;
  // Captioning prompts return "mock caption <hex>" keyed by (seed, audio);
  // judge prompts return a well-formed answer in the prompt's mandated
  // format with a hash-derived value.
  std::string Generate(const GenerateRequest& request) override;

  const MockOracleConfig& config() const { return cfg_; }

 private:
  MockOracleConfig cfg_;
};

}  // namespace aqa

#endif  // AQA_MOCK_BACKEND_H_

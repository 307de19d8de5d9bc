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

#ifndef AQA_GATEWAY_H_
#define AQA_GATEWAY_H_

#include <atomic>
#include <filesystem>
#include <memory>
#include <semaphore>
#include <string>
#include <vector>

#include "aqa/backend.h"
#include "aqa/response_cache.h"
#include "aqa/scoring.h"

namespace aqa {

struct GatewayOptions {
  int max_in_flight = 8;
  int max_retries = 2;          // retries after the first attempt
  int initial_backoff_ms = 200; // doubled per retry
  std::filesystem::path cache_dir;  // empty: in-memory cache only
};

enum class RequestKind { kYesNo, kEmbedAudio, kEmbedText, kGenerate, kCaption };

const char* RequestKindName(RequestKind kind);

struct GatewayStats {
  long long backend_calls = 0;
  long long cache_hits = 0;
};

// Single entry point for model inference. Every request is keyed by
// CacheDigest and answered from the cache when possible; otherwise it goes to
// the backend under a bounded in-flight limit with retry and exponential
// backoff for transient failures (unreachable, 5xx). Thread-safe.
class Gateway {
 public:
  Gateway(BackendDescriptor descriptor, std::unique_ptr<Backend> backend,
          GatewayOptions options = {});

  YesNoLogProbs QueryYesNo(const AudioRef& audio, const RenderedPrompt& prompt);
  AlignmentScore Score(const AudioRef& audio, const RenderedPrompt& prompt);
  EmbeddingVector EmbedAudio(const AudioRef& audio);
  EmbeddingVector EmbedText(const std::string& text);
  // kind is kGenerate or kCaption; the two are cached separately.
  std::string Generate(const std::vector<const AudioRef*>& audios, const RenderedPrompt& prompt,
                       RequestKind kind = RequestKind::kGenerate);

  std::string YesNoDigest(const AudioRef& audio, const RenderedPrompt& prompt) const;

  const BackendDescriptor& descriptor() const { return descriptor_; }
  const GatewayOptions& options() const { return options_; }
  GatewayStats stats() const { return {backend_calls_.load(), cache_hits_.load()}; }

 private:
  template <typename Fn>
  nlohmann::json Cached(const std::string& digest, const nlohmann::json& summary, Fn&& call);

  BackendDescriptor descriptor_;
  std::unique_ptr<Backend> backend_;
  GatewayOptions options_;
  ResponseCache cache_;
  std::counting_semaphore<1024> in_flight_;
  std::atomic<long long> backend_calls_{0};
  std::atomic<long long> cache_hits_{0};
};

}  // namespace aqa

#endif  // AQA_GATEWAY_H_

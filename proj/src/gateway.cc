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

#include "aqa/gateway.h"

#include <algorithm>
#include <chrono>
#include <thread>

#include "aqa/error.h"

namespace aqa {
namespace {

using nlohmann::json;

bool IsTransient(ErrorCode code) {
  return code == ErrorCode::kBackendUnreachable || code == ErrorCode::kBackendFailure;
}

std::string JoinDigests(const std::vector<const AudioRef*>& audios) {
  std::string out;
  for (const auto* a : audios) {
    if (!out.empty()) out += ',';
    out += a->content_digest;
  }
  return out;
}

void RequireLoaded(const AudioRef& audio) {
  if (!audio.loaded()) {
    throw Error(ErrorCode::kAudioUnreadable, "audio not loaded: " + audio.locator);
  }
}

}  // namespace

const char* RequestKindName(RequestKind kind) {
  switch (kind) {
    case RequestKind::kYesNo: return "yesno";
    case RequestKind::kEmbedAudio: return "embed_audio";
    case RequestKind::kEmbedText: return "embed_text";
    case RequestKind::kGenerate: return "generate";
    case RequestKind::kCaption: return "caption";
  }
  return "yesno";
}

Gateway::Gateway(BackendDescriptor descriptor, std::unique_ptr<Backend> backend,
                 GatewayOptions options)
    : descriptor_(std::move(descriptor)),
      backend_(std::move(backend)),
      options_(std::move(options)),
      cache_(options_.cache_dir),
      in_flight_(std::clamp(options_.max_in_flight, 1, 1024)) {
  descriptor_.Validate();
  if (backend_ == nullptr) throw Error(ErrorCode::kInvalidArgument, "gateway needs a backend");
}

template <typename Fn>
json Gateway::Cached(const std::string& digest, const json& summary, Fn&& call) {
  if (auto hit = cache_.Lookup(digest)) {
    ++cache_hits_;
    return *hit;
  }
  json response;
  for (int attempt = 0;; ++attempt) {
    try {
      in_flight_.acquire();
      struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
      } release{in_flight_};
      ++backend_calls_;
      response = call();
      break;
    } catch (const Error& e) {
      if (!IsTransient(e.code()) || attempt >= options_.max_retries) throw;
    }
    const int delay = options_.initial_backoff_ms << std::min(attempt, 16);
    std::this_thread::sleep_for(std::chrono::milliseconds(delay));
  }
  cache_.Store(digest, summary, response, descriptor_.backend_id);
  return response;
}

std::string Gateway::YesNoDigest(const AudioRef& audio, const RenderedPrompt& prompt) const {
  const std::string kind =
      std::string("yesno:") + json{descriptor_.yes_forms, descriptor_.no_forms}.dump();
  return CacheDigest(audio.content_digest, prompt.system_prompt, prompt.user_prompt,
                     descriptor_.backend_id, kind);
}

YesNoLogProbs Gateway::QueryYesNo(const AudioRef& audio, const RenderedPrompt& prompt) {
  RequireLoaded(audio);
  const std::string digest = YesNoDigest(audio, prompt);
  json summary{{"kind", "yesno"},
               {"audio", audio.content_digest},
               {"template_id", prompt.template_id},
               {"user_prompt", prompt.user_prompt}};
  json r = Cached(digest, summary, [&] {
    YesNoRequest req{&audio, prompt, descriptor_.yes_forms, descriptor_.no_forms};
    const YesNoLogProbs lp = backend_->YesNo(req);
    return json{{"s_yes", lp.s_yes()}, {"s_no", lp.s_no()}};
  });
  try {
    return YesNoLogProbs(r.at("s_yes").get<double>(), r.at("s_no").get<double>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocolViolation, std::string("cached yes/no record: ") + e.what());
  }
}

AlignmentScore Gateway::Score(const AudioRef& audio, const RenderedPrompt& prompt) {
  const auto lp = QueryYesNo(audio, prompt);
  return AlignmentScore{AqaScore(lp), descriptor_.backend_id, prompt.template_id,
                        YesNoDigest(audio, prompt)};
}

EmbeddingVector Gateway::EmbedAudio(const AudioRef& audio) {
  RequireLoaded(audio);
  const std::string digest =
      CacheDigest(audio.content_digest, "", "", descriptor_.backend_id, "embed_audio");
  json r = Cached(digest, {{"kind", "embed_audio"}, {"audio", audio.content_digest}}, [&] {
    EmbedRequest req{EmbedKind::kAudio, &audio, "", descriptor_.backend_id};
    return json{{"vector", backend_->Embed(req)}};
  });
  return EmbeddingVector(r.at("vector").get<std::vector<double>>());
}

EmbeddingVector Gateway::EmbedText(const std::string& text) {
  const std::string digest = CacheDigest("", "", text, descriptor_.backend_id, "embed_text");
  json r = Cached(digest, {{"kind", "embed_text"}, {"text", text}}, [&] {
    EmbedRequest req{EmbedKind::kText, nullptr, text, descriptor_.backend_id};
    return json{{"vector", backend_->Embed(req)}};
  });
  return EmbeddingVector(r.at("vector").get<std::vector<double>>());
}

std::string Gateway::Generate(const std::vector<const AudioRef*>& audios,
                              const RenderedPrompt& prompt, RequestKind kind) {
  for (const auto* a : audios) RequireLoaded(*a);
  const int max_tokens = descriptor_.decoding.max_new_tokens;
  const std::string kind_key = std::string(RequestKindName(kind)) +
                               ":max_new_tokens=" + std::to_string(max_tokens);
  const std::string digest = CacheDigest(JoinDigests(audios), prompt.system_prompt,
                                         prompt.user_prompt, descriptor_.backend_id, kind_key);
  json summary{{"kind", RequestKindName(kind)},
               {"audio", JoinDigests(audios)},
               {"template_id", prompt.template_id}};
  json r = Cached(digest, summary, [&] {
    GenerateRequest req{audios, prompt, max_tokens};
    return json{{"text", backend_->Generate(req)}};
  });
  return r.at("text").get<std::string>();
}

}  // namespace aqa

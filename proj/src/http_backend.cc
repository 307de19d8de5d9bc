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

#include "aqa/http_backend.h"

#include "aqa/digest.h"
#include "aqa/error.h"
#include "aqa/protocol.h"
#include "httplib.h"

namespace aqa {

using nlohmann::json;

HttpBackend::HttpBackend(std::string base_url, HttpOptions options)
    : base_url_(std::move(base_url)), options_(std::move(options)) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (base_url_.rfind("http://", 0) != 0 && base_url_.rfind("https://", 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "backend URL must start with http:// or https://");
  }
}

json HttpBackend::Post(const char* path, const json& body) const {
  httplib::Client client(base_url_);
  const auto sec = options_.timeout_ms / 1000;
  const auto usec = (options_.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
  if (!options_.bearer_token.empty()) client.set_bearer_token_auth(options_.bearer_token);

  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kBackendUnreachable,
                base_url_ + path + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) throw protocol::MapHttpError(res->status, res->body);
  json doc = json::parse(res->body, nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::kProtocolViolation, std::string(path) + ": response is not JSON");
  }
  return doc;
}

YesNoLogProbs HttpBackend::YesNo(const YesNoRequest& request) {
  json body{{"audio_b64", Base64Encode(ReadAudioBytes(*request.audio))},
            {"system_prompt", request.prompt.system_prompt},
            {"user_prompt", request.prompt.user_prompt},
            {"yes_forms", request.yes_forms},
            {"no_forms", request.no_forms}};
  const auto r = protocol::ParseYesNoResponse(Post(protocol::kYesNoPath, body));
  return YesNoLogProbs(r.s_yes, r.s_no);
}

std::vector<double> HttpBackend::Embed(const EmbedRequest& request) {
  json body;
  if (request.kind == EmbedKind::kAudio) {
    body = {{"kind", "audio"}, {"audio_b64", Base64Encode(ReadAudioBytes(*request.audio))}};
  } else {
    body = {{"kind", "text"}, {"text", request.text}};
  }
  if (!request.model_id.empty()) body["model_id"] = request.model_id;
  return protocol::ParseEmbedResponse(Post(protocol::kEmbedPath, body)).vector;
}

std::string HttpBackend::Generate(const GenerateRequest& request) {
  json body{{"system_prompt", request.prompt.system_prompt},
            {"user_prompt", request.prompt.user_prompt},
            {"max_new_tokens", request.max_new_tokens}};
  if (request.audios.empty()) {
    body["text_only"] = true;
  } else if (request.audios.size() == 1) {
    body["audio_b64"] = Base64Encode(ReadAudioBytes(*request.audios[0]));
  } else if (request.audios.size() > 1) {
    json list = json::array();
    for (const auto* a : request.audios) list.push_back(Base64Encode(ReadAudioBytes(*a)));
    body["audios_b64"] = std::move(list);
  }
  const auto r = protocol::ParseGenerateResponse(Post(protocol::kGeneratePath, body));
  const long long limit = request.max_new_tokens;
  if (r.num_tokens > limit || static_cast<long long>(CountWords(r.text)) > limit) {
    throw Error(ErrorCode::kProtocolViolation,
                "generation exceeds max_new_tokens=" + std::to_string(limit));
  }
  return r.text;
}

}  // namespace aqa

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

#ifndef AQA_PROTOCOL_H_
#define AQA_PROTOCOL_H_

// JSON wire protocol shared with inference servers:
//   POST /v1/yesno    {audio_b64|audio_url, system_prompt, user_prompt,
//                      yes_forms, no_forms}          -> {s_yes, s_no, model_id}
//   POST /v1/embed    {kind, audio_b64|audio_url|text, model_id?}
//                                                     -> {vector, model_id}
//   POST /v1/generate {audio_b64|audio_url|audios_b64?, system_prompt,
//                      user_prompt, max_new_tokens}   -> {text, model_id, num_tokens?}
//   errors: HTTP 4xx/5xx with {error_code, message}
//   GET  /v1/health                                   -> {model_id, clap_checkpoint_id}

#include <string>
#include <vector>

#include "aqa/error.h"
#include "json.hpp"

namespace aqa::protocol {

using nlohmann::json;

inline constexpr const char* kYesNoPath = "/v1/yesno";
inline constexpr const char* kEmbedPath = "/v1/embed";
inline constexpr const char* kGeneratePath = "/v1/generate";
inline constexpr const char* kHealthPath = "/v1/health";

// Each validator returns an empty string when the document conforms, or a
// short description of the first violation.
std::string ValidateYesNoRequest(const json& doc);
std::string ValidateYesNoResponse(const json& doc);
std::string ValidateEmbedRequest(const json& doc);
std::string ValidateEmbedResponse(const json& doc);
std::string ValidateGenerateRequest(const json& doc);
std::string ValidateGenerateResponse(const json& doc);
std::string ValidateErrorResponse(const json& doc);
std::string ValidateHealthResponse(const json& doc);

// Looks up a validator by name ("yesno_request", "embed_response", ...).
std::string Validate(const std::string& schema, const json& doc);

struct YesNoResponse {
  double s_yes = 0.0;
  double s_no = 0.0;
  std::string model_id;
};

struct EmbedResponse {
  std::vector<double> vector;
  std::string model_id;
};

struct GenerateResponse {
  std::string text;
  std::string model_id;
  long long num_tokens = -1;  // -1 when the server does not report it
};

// Throw kProtocolViolation on schema violations.
YesNoResponse ParseYesNoResponse(const json& doc);
EmbedResponse ParseEmbedResponse(const json& doc);
GenerateResponse ParseGenerateResponse(const json& doc);

// Maps an HTTP error status and optional {error_code, message} body to a
// typed error: 422 or error_code "surface_form_unscorable" ->
// kSurfaceFormMissing; 408 / 429 and 5xx -> kBackendFailure (retryable); other
// 4xx -> kProtocolViolation.
Error MapHttpError(int status, const std::string& body);

}  // namespace aqa::protocol

#endif  // AQA_PROTOCOL_H_

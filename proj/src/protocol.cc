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

#include "aqa/protocol.h"

#include <cmath>

namespace aqa::protocol {
namespace {

bool IsNonEmptyString(const json& doc, const char* key) {
  auto it = doc.find(key);
  return it != doc.end() && it->is_string() && !it->get_ref<const std::string&>().empty();
}

bool IsFiniteNumber(const json& v) { return v.is_number() && std::isfinite(v.get<double>()); }

std::string CheckForms(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_array() || it->empty()) {
    return std::string(key) + " must be a non-empty array";
  }
  for (const auto& f : *it) {
    if (!f.is_string() || f.get_ref<const std::string&>().empty()) {
      return std::string(key) + " entries must be non-empty strings";
    }
  }
  return "";
}

// Exactly one audio source among audio_b64 / audio_url (and audios_b64 when
// allowed). required=false admits text-only requests.
std::string CheckAudioSource(const json& doc, bool required, bool allow_list) {
  int sources = 0;
  for (const char* key : {"audio_b64", "audio_url"}) {
    if (doc.contains(key)) {
      if (!IsNonEmptyString(doc, key)) return std::string(key) + " must be a non-empty string";
      ++sources;
    }
  }
  if (doc.contains("audios_b64")) {
    if (!allow_list) return "audios_b64 is not accepted here";
    const auto& list = doc["audios_b64"];
    if (!list.is_array() || list.size() < 2) return "audios_b64 must list at least two clips";
    for (const auto& a : list) {
      if (!a.is_string() || a.get_ref<const std::string&>().empty()) {
        return "audios_b64 entries must be non-empty strings";
      }
    }
    ++sources;
  }
  if (sources > 1) return "only one audio source may be given";
  if (required && sources == 0) return "missing audio_b64 or audio_url";
  return "";
}

std::string CheckPrompts(const json& doc) {
  if (!doc.contains("system_prompt") || !doc["system_prompt"].is_string()) {
    return "system_prompt must be a string";
  }
  if (!IsNonEmptyString(doc, "user_prompt")) return "user_prompt must be a non-empty string";
  return "";
}

std::string CheckModelId(const json& doc) {
  return IsNonEmptyString(doc, "model_id") ? "" : "model_id must be a non-empty string";
}

void Require(const std::string& problem) {
  if (!problem.empty()) throw Error(ErrorCode::kProtocolViolation, problem);
}

}  // namespace

std::string ValidateYesNoRequest(const json& doc) {
  if (!doc.is_object()) return "request must be an object";
  if (auto p = CheckAudioSource(doc, true, false); !p.empty()) return p;
  if (auto p = CheckPrompts(doc); !p.empty()) return p;
  if (auto p = CheckForms(doc, "yes_forms"); !p.empty()) return p;
  return CheckForms(doc, "no_forms");
}

std::string ValidateYesNoResponse(const json& doc) {
  if (!doc.is_object()) return "response must be an object";
  for (const char* key : {"s_yes", "s_no"}) {
    if (!doc.contains(key) || !IsFiniteNumber(doc[key])) {
      return std::string(key) + " must be a finite number";
    }
  }
  return CheckModelId(doc);
}

std::string ValidateEmbedRequest(const json& doc) {
  if (!doc.is_object()) return "request must be an object";
  if (!doc.contains("kind") || !doc["kind"].is_string()) return "kind must be a string";
  const auto& kind = doc["kind"].get_ref<const std::string&>();
  if (kind == "audio") {
    if (doc.contains("text")) return "audio embeddings take no text";
    if (auto p = CheckAudioSource(doc, true, false); !p.empty()) return p;
  } else if (kind == "text") {
    if (doc.contains("audio_b64") || doc.contains("audio_url")) return "text embeddings take no audio";
    if (!IsNonEmptyString(doc, "text")) return "text must be a non-empty string";
  } else {
    return "kind must be \"audio\" or \"text\"";
  }
  if (doc.contains("model_id") && !doc["model_id"].is_string()) return "model_id must be a string";
  return "";
}

std::string ValidateEmbedResponse(const json& doc) {
  if (!doc.is_object()) return "response must be an object";
  auto it = doc.find("vector");
  if (it == doc.end() || !it->is_array() || it->empty()) return "vector must be a non-empty array";
  for (const auto& v : *it) {
    if (!IsFiniteNumber(v)) return "vector entries must be finite numbers";
  }
  return CheckModelId(doc);
}

std::string ValidateGenerateRequest(const json& doc) {
  if (!doc.is_object()) return "request must be an object";
  // Audio is mandatory unless the request opts out with "text_only": true.
  bool text_only = false;
  if (doc.contains("text_only")) {
    if (!doc["text_only"].is_boolean()) return "text_only must be a boolean";
    text_only = doc["text_only"].get<bool>();
  }
  if (auto p = CheckAudioSource(doc, !text_only, true); !p.empty()) return p;
  if (text_only && (doc.contains("audio_b64") || doc.contains("audio_url") ||
                    doc.contains("audios_b64"))) {
    return "text_only requests carry no audio";
  }
  if (auto p = CheckPrompts(doc); !p.empty()) return p;
  auto it = doc.find("max_new_tokens");
  if (it == doc.end() || !it->is_number_integer() || it->get<long long>() < 1) {
    return "max_new_tokens must be an integer >= 1";
  }
  return "";
}

std::string ValidateGenerateResponse(const json& doc) {
  if (!doc.is_object()) return "response must be an object";
  if (!doc.contains("text") || !doc["text"].is_string()) return "text must be a string";
  if (doc.contains("num_tokens") &&
      (!doc["num_tokens"].is_number_integer() || doc["num_tokens"].get<long long>() < 0)) {
    return "num_tokens must be a non-negative integer";
  }
  return CheckModelId(doc);
}

std::string ValidateErrorResponse(const json& doc) {
  if (!doc.is_object()) return "error must be an object";
  if (!IsNonEmptyString(doc, "error_code")) return "error_code must be a non-empty string";
  if (!doc.contains("message") || !doc["message"].is_string()) return "message must be a string";
  return "";
}

std::string ValidateHealthResponse(const json& doc) {
  if (!doc.is_object()) return "response must be an object";
  if (auto p = CheckModelId(doc); !p.empty()) return p;
  if (!doc.contains("clap_checkpoint_id") || !doc["clap_checkpoint_id"].is_string()) {
    return "clap_checkpoint_id must be a string";
  }
  return "";
}

std::string Validate(const std::string& schema, const json& doc) {
  if (schema == "yesno_request") return ValidateYesNoRequest(doc);
  if (schema == "yesno_response") return ValidateYesNoResponse(doc);
  if (schema == "embed_request") return ValidateEmbedRequest(doc);
  if (schema == "embed_response") return ValidateEmbedResponse(doc);
  if (schema == "generate_request") return ValidateGenerateRequest(doc);
  if (schema == "generate_response") return ValidateGenerateResponse(doc);
  if (schema == "error_response") return ValidateErrorResponse(doc);
  if (schema == "health_response") return ValidateHealthResponse(doc);
  throw Error(ErrorCode::kInvalidArgument, "unknown schema '" + schema + "'");
}

YesNoResponse ParseYesNoResponse(const json& doc) {
  Require(ValidateYesNoResponse(doc));
  return {doc["s_yes"].get<double>(), doc["s_no"].get<double>(),
          doc["model_id"].get<std::string>()};
}

EmbedResponse ParseEmbedResponse(const json& doc) {
  Require(ValidateEmbedResponse(doc));
  return {doc["vector"].get<std::vector<double>>(), doc["model_id"].get<std::string>()};
}

GenerateResponse ParseGenerateResponse(const json& doc) {
  Require(ValidateGenerateResponse(doc));
  GenerateResponse r{doc["text"].get<std::string>(), doc["model_id"].get<std::string>()};
  if (doc.contains("num_tokens")) r.num_tokens = doc["num_tokens"].get<long long>();
  return r;
}

Error MapHttpError(int status, const std::string& body) {
  std::string code, message = body;
  const json doc = json::parse(body, nullptr, false);
  if (!doc.is_discarded() && ValidateErrorResponse(doc).empty()) {
    code = doc["error_code"].get<std::string>();
    message = doc["message"].get<std::string>();
  }
  const std::string detail =
      "HTTP " + std::to_string(status) + (code.empty() ? "" : " " + code) + ": " + message;
  if (status == 422 || code == "surface_form_unscorable") {
    return Error(ErrorCode::kSurfaceFormMissing, detail);
  }
  // Timeouts and rate limiting are saturation, not malformed requests; they stay retryable.
  if (status == 408 || status == 429) return Error(ErrorCode::kBackendFailure, detail);
  if (status >= 400 && status < 500) return Error(ErrorCode::kProtocolViolation, detail);
  return Error(ErrorCode::kBackendFailure, detail);
}

}  // namespace aqa::protocol

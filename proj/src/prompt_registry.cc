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

#include "aqa/prompt_registry.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "aqa/digest.h"
#include "aqa/error.h"
#include "json.hpp"

#ifndef AQA_DEFAULT_REGISTRY
#define AQA_DEFAULT_REGISTRY "data/registry.json"
#endif

namespace aqa {
namespace {

using nlohmann::json;

bool IsPlaceholderChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

// Returns the length of a {name} token starting at pos, or 0.
std::size_t PlaceholderAt(std::string_view body, std::size_t pos, std::string_view* name) {
  if (body[pos] != '{') return 0;
  std::size_t end = pos + 1;
  while (end < body.size() && IsPlaceholderChar(body[end])) ++end;
  if (end == pos + 1 || end >= body.size() || body[end] != '}') return 0;
  *name = body.substr(pos + 1, end - pos - 1);
  return end - pos + 1;
}

std::size_t CountOf(const std::vector<std::string>& names, std::string_view name) {
  return static_cast<std::size_t>(std::count(names.begin(), names.end(), name));
}

bool IsBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

TemplateKind ParseKind(const std::string& s) {
  if (s == "single") return TemplateKind::kSingleDescription;
  if (s == "pairwise_text") return TemplateKind::kPairwiseText;
  if (s == "instruction") return TemplateKind::kInstruction;
  throw Error(ErrorCode::kRegistryInvalid, "unknown template kind '" + s + "'");
}

// Rejects documents with duplicate keys in any object; nlohmann keeps the
// last value silently otherwise.
json ParseStrict(std::string_view text) {
  std::vector<std::set<std::string>> keys;
  json::parser_callback_t cb = [&keys](int /*depth*/, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        keys.emplace_back();
        break;
      case json::parse_event_t::object_end:
        keys.pop_back();
        break;
      case json::parse_event_t::key: {
        const auto& k = parsed.get_ref<const std::string&>();
        if (!keys.back().insert(k).second) {
          throw Error(ErrorCode::kRegistryInvalid, "duplicate key '" + k + "'");
        }
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(text.begin(), text.end(), cb);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kRegistryInvalid, e.what());
  }
}

void ValidateTemplate(const PromptTemplate& t) {
  const auto names = FindPlaceholders(t.body);
  const auto bad = [&t](const std::string& why) {
    throw Error(ErrorCode::kRegistryInvalid, "template '" + t.id + "': " + why);
  };
  switch (t.kind) {
    case TemplateKind::kSingleDescription:
      if (names.size() != 1 || names[0] != "description") {
        bad("single templates need exactly one {description}");
      }
      break;
    case TemplateKind::kPairwiseText:
      if (names.size() != 2 || CountOf(names, "description_1") != 1 ||
          CountOf(names, "description_2") != 1) {
        bad("pairwise templates need {description_1} and {description_2} once each");
      }
      break;
    case TemplateKind::kInstruction: {
      std::set<std::string> uniq(names.begin(), names.end());
      if (uniq.size() != names.size()) bad("instruction placeholders must be unique");
      break;
    }
  }
}

}  // namespace

const char* TemplateKindName(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::kSingleDescription: return "single";
    case TemplateKind::kPairwiseText: return "pairwise_text";
    case TemplateKind::kInstruction: return "instruction";
  }
  return "single";
}

std::vector<std::string> FindPlaceholders(std::string_view body) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    std::string_view name;
    if (const std::size_t len = PlaceholderAt(body, i, &name); len > 0) {
      out.emplace_back(name);
      i += len - 1;
    }
  }
  return out;
}

std::string SubstitutePlaceholders(std::string_view body,
                                   const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    std::string_view name;
    const std::size_t len = PlaceholderAt(body, i, &name);
    if (len > 0) {
      if (auto it = values.find(std::string(name)); it != values.end()) {
        out += it->second;
        i += len - 1;
        continue;
      }
    }
    out.push_back(body[i]);
  }
  return out;
}

PromptRegistry PromptRegistry::FromJson(std::string_view text) {
  const json doc = ParseStrict(text);
  PromptRegistry reg;
  try {
    reg.digest_ = Sha256Hex(text);
    reg.version_ = doc.at("version").get<std::string>();
    reg.suffix_ = doc.at("suffix").get<std::string>();
    for (const auto& [id, body] : doc.at("system_prompts").items()) {
      reg.system_prompts_.emplace(id, body.get<std::string>());
    }
    for (const auto& [id, rec] : doc.at("templates").items()) {
      PromptTemplate t;
      t.id = id;
      t.kind = ParseKind(rec.at("kind").get<std::string>());
      t.body = rec.at("body").get<std::string>();
      t.append_suffix = rec.at("suffix").get<bool>();
      t.system_prompt_id = rec.at("system_prompt_id").get<std::string>();
      ValidateTemplate(t);
      if (!reg.system_prompts_.contains(t.system_prompt_id)) {
        throw Error(ErrorCode::kRegistryInvalid,
                    "template '" + id + "' references unknown system prompt '" +
                        t.system_prompt_id + "'");
      }
      reg.templates_.emplace(id, std::move(t));
    }
    for (const auto& [family, rec] : doc.at("template_sets").items()) {
      TemplateSetEntry entry{ParseKind(rec.at("kind").get<std::string>()),
                             rec.at("ids").get<std::vector<std::string>>()};
      for (const auto& id : entry.ids) {
        auto it = reg.templates_.find(id);
        if (it == reg.templates_.end() || it->second.kind != entry.kind) {
          throw Error(ErrorCode::kRegistryInvalid,
                      "template set '" + family + "' lists invalid id '" + id + "'");
        }
      }
      reg.sets_.emplace(family, std::move(entry));
    }
    if (doc.contains("baselines")) {
      for (const auto& [method, roles] : doc.at("baselines").items()) {
        auto& dst = reg.baselines_[method];
        for (const auto& [role, id] : roles.items()) {
          const auto tid = id.get<std::string>();
          if (!reg.templates_.contains(tid)) {
            throw Error(ErrorCode::kRegistryInvalid, "baseline '" + method + "/" + role +
                                                         "' references unknown template");
          }
          dst.emplace(role, tid);
        }
      }
    }
    if (doc.contains("clap_checkpoints")) {
      for (const auto& c : doc.at("clap_checkpoints")) {
        reg.clap_checkpoints_.push_back({c.at("name").get<std::string>(),
                                         c.at("checkpoint").get<std::string>(),
                                         c.at("training_data").get<std::string>()});
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kRegistryInvalid, e.what());
  }
  return reg;
}

PromptRegistry PromptRegistry::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open registry " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return FromJson(ss.str());
}

std::filesystem::path PromptRegistry::DefaultPath() {
  if (const char* env = std::getenv("AQA_REGISTRY"); env != nullptr && *env != '\0') {
    return env;
  }
  return AQA_DEFAULT_REGISTRY;
}

PromptRegistry PromptRegistry::LoadDefault() { return Load(DefaultPath()); }

const PromptTemplate& PromptRegistry::Get(std::string_view id) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) {
    throw Error(ErrorCode::kUnknownTemplate, "no template '" + std::string(id) + "'");
  }
  return it->second;
}

bool PromptRegistry::Contains(std::string_view id) const { return templates_.contains(id); }

const std::string& PromptRegistry::SystemPrompt(std::string_view id) const {
  auto it = system_prompts_.find(id);
  if (it == system_prompts_.end()) {
    throw Error(ErrorCode::kUnknownTemplate, "no system prompt '" + std::string(id) + "'");
  }
  return it->second;
}

RenderedPrompt PromptRegistry::Finish(const PromptTemplate& t, std::string user,
                                      std::string subject) const {
  if (t.append_suffix) {
    user += ' ';
    user += suffix_;
  }
  return RenderedPrompt{SystemPrompt(t.system_prompt_id), std::move(user), t.id,
                        std::move(subject)};
}

RenderedPrompt PromptRegistry::RenderSingle(std::string_view template_id,
                                            std::string_view description) const {
  const auto& t = Get(template_id);
  if (t.kind != TemplateKind::kSingleDescription) {
    throw Error(ErrorCode::kKindMismatch,
                "template '" + t.id + "' is " + TemplateKindName(t.kind) + ", not single");
  }
  if (IsBlank(description)) {
    throw Error(ErrorCode::kEmptyDescription, "description is empty");
  }
  std::string desc(description);
  return Finish(t, SubstitutePlaceholders(t.body, {{"description", desc}}), desc);
}

RenderedPrompt PromptRegistry::RenderPairwise(std::string_view template_id,
                                              std::string_view description_1,
                                              std::string_view description_2) const {
  const auto& t = Get(template_id);
  if (t.kind != TemplateKind::kPairwiseText) {
    throw Error(ErrorCode::kKindMismatch,
                "template '" + t.id + "' is " + TemplateKindName(t.kind) + ", not pairwise_text");
  }
  if (IsBlank(description_1) || IsBlank(description_2)) {
    throw Error(ErrorCode::kEmptyDescription, "description is empty");
  }
  std::string d1(description_1), d2(description_2);
  auto user = SubstitutePlaceholders(t.body, {{"description_1", d1}, {"description_2", d2}});
  return Finish(t, std::move(user), d1 + "\n" + d2);
}

RenderedPrompt PromptRegistry::RenderInstruction(
    std::string_view template_id, const std::map<std::string, std::string>& values) const {
  const auto& t = Get(template_id);
  if (t.kind != TemplateKind::kInstruction) {
    throw Error(ErrorCode::kKindMismatch, "template '" + t.id + "' is not an instruction");
  }
  const auto names = FindPlaceholders(t.body);
  std::set<std::string> expected(names.begin(), names.end());
  for (const auto& n : expected) {
    auto it = values.find(n);
    if (it == values.end()) {
      throw Error(ErrorCode::kInvalidArgument, "missing value for {" + n + "} in " + t.id);
    }
    if (IsBlank(it->second)) {
      throw Error(ErrorCode::kEmptyDescription, "empty value for {" + n + "} in " + t.id);
    }
  }
  for (const auto& [k, v] : values) {
    if (!expected.contains(k)) {
      throw Error(ErrorCode::kInvalidArgument, "template " + t.id + " has no {" + k + "}");
    }
  }
  return Finish(t, SubstitutePlaceholders(t.body, values), "");
}

std::vector<std::string> PromptRegistry::TemplateSet(TemplateKind kind,
                                                     std::string_view family) const {
  auto it = sets_.find(family);
  if (it == sets_.end()) {
    throw Error(ErrorCode::kUnknownFamily, "no template set for '" + std::string(family) + "'");
  }
  if (it->second.kind != kind) {
    throw Error(ErrorCode::kKindMismatch, "family '" + std::string(family) + "' uses " +
                                              TemplateKindName(it->second.kind) + " templates");
  }
  return it->second.ids;
}

TemplateKind PromptRegistry::FamilyKind(std::string_view family) const {
  auto it = sets_.find(family);
  if (it == sets_.end()) {
    throw Error(ErrorCode::kUnknownFamily, "no template set for '" + std::string(family) + "'");
  }
  return it->second.kind;
}

std::vector<std::string> PromptRegistry::Families() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : sets_) out.push_back(name);
  return out;
}

const std::string& PromptRegistry::BaselineTemplate(std::string_view method,
                                                    std::string_view role) const {
  auto m = baselines_.find(method);
  if (m != baselines_.end()) {
    if (auto r = m->second.find(role); r != m->second.end()) return r->second;
  }
  throw Error(ErrorCode::kUnknownFamily,
              "no " + std::string(method) + " template for '" + std::string(role) + "'");
}

}  // namespace aqa

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

#ifndef AQA_PROMPT_REGISTRY_H_
#define AQA_PROMPT_REGISTRY_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace aqa {

enum class TemplateKind {
  kSingleDescription,  // one {description}
  kPairwiseText,       // {description_1} and {description_2}
  kInstruction,        // baseline instruction with free-form named placeholders
};

const char* TemplateKindName(TemplateKind kind);

struct PromptTemplate {
  std::string id;
  TemplateKind kind = TemplateKind::kSingleDescription;
  std::string body;
  bool append_suffix = true;
  std::string system_prompt_id;
};

struct RenderedPrompt {
  std::string system_prompt;
  std::string user_prompt;
  std::string template_id;
  // The substituted description(s), newline-joined for pairwise templates.
  // Used as the text key for planted mock entries.
  std::string subject;
};

struct ClapCheckpoint {
  std::string name;
  std::string checkpoint;
  std::string training_data;
};

// Immutable collection of system prompts and question templates, loaded from
// a JSON registry file. Safe for concurrent reads.
class PromptRegistry {
 public:
  static PromptRegistry FromJson(std::string_view text);
  static PromptRegistry Load(const std::filesystem::path& path);
  // $AQA_REGISTRY if set, otherwise the registry bundled with the build.
  static PromptRegistry LoadDefault();
  static std::filesystem::path DefaultPath();

  const PromptTemplate& Get(std::string_view id) const;
  bool Contains(std::string_view id) const;
  const std::string& SystemPrompt(std::string_view id) const;

  RenderedPrompt RenderSingle(std::string_view template_id, std::string_view description) const;
  RenderedPrompt RenderPairwise(std::string_view template_id, std::string_view description_1,
                                std::string_view description_2) const;
  // Every placeholder in the body must be supplied and every supplied key
  // must appear in the body.
  RenderedPrompt RenderInstruction(std::string_view template_id,
                                   const std::map<std::string, std::string>& values) const;

  // Ordered template ids for a benchmark family (relate, pam, relate-pair,
  // baton, baton-pair, compa, fense, brace).
  std::vector<std::string> TemplateSet(TemplateKind kind, std::string_view family) const;
  TemplateKind FamilyKind(std::string_view family) const;
  std::vector<std::string> Families() const;

  // method is "prompting" or "cascade"; role is a family name or "caption".
  const std::string& BaselineTemplate(std::string_view method, std::string_view role) const;

  const std::vector<ClapCheckpoint>& clap_checkpoints() const { return clap_checkpoints_; }
  const std::string& version() const { return version_; }
  // SHA-256 of the registry file bytes.
  const std::string& digest() const { return digest_; }
  const std::string& suffix() const { return suffix_; }

 private:
  struct TemplateSetEntry {
    TemplateKind kind;
    std::vector<std::string> ids;
  };

  PromptRegistry() = default;
  RenderedPrompt Finish(const PromptTemplate& t, std::string user, std::string subject) const;

  std::string version_;
  std::string digest_;
  std::string suffix_;
  std::map<std::string, std::string, std::less<>> system_prompts_;
  std::map<std::string, PromptTemplate, std::less<>> templates_;
  std::map<std::string, TemplateSetEntry, std::less<>> sets_;
  std::map<std::string, std::map<std::string, std::string, std::less<>>, std::less<>> baselines_;
  std::vector<ClapCheckpoint> clap_checkpoints_;
};

// Placeholder names appearing as {name} in body, in order of appearance.
std::vector<std::string> FindPlaceholders(std::string_view body);

// Single-pass substitution; substituted text is never rescanned.
std::string SubstitutePlaceholders(std::string_view body,
                                   const std::map<std::string, std::string>& values);

}  // namespace aqa

#endif  // AQA_PROMPT_REGISTRY_H_

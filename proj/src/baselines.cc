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

#include "aqa/baselines.h"

#include <charconv>
#include <functional>
#include <cmath>
#include <map>
#include <sstream>

namespace aqa {
namespace {

char Lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }
bool IsAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsBlank(char c) { return c == ' ' || c == '\t'; }

// Matches a multi-word key case-insensitively at pos, allowing runs of blanks
// between words. Returns the position just past the key, or npos.
std::size_t MatchKey(std::string_view text, std::size_t pos, std::string_view key) {
  std::size_t i = pos;
  for (std::size_t k = 0; k < key.size(); ++k) {
    if (key[k] == ' ') {
      if (i >= text.size() || !IsBlank(text[i])) return std::string_view::npos;
      while (i < text.size() && IsBlank(text[i])) ++i;
      continue;
    }
    if (i >= text.size() || Lower(text[i]) != key[k]) return std::string_view::npos;
    ++i;
  }
  return i;
}

std::size_t SkipBlanks(std::string_view text, std::size_t i) {
  while (i < text.size() && IsBlank(text[i])) ++i;
  return i;
}

// Position just after "<key> :" with the key not glued to a preceding letter.
std::size_t MatchLabel(std::string_view text, std::size_t pos, std::string_view key) {
  if (pos > 0 && IsAlpha(text[pos - 1])) return std::string_view::npos;
  std::size_t i = MatchKey(text, pos, key);
  if (i == std::string_view::npos) return i;
  i = SkipBlanks(text, i);
  // Markdown emphasis around the label ("**Score**: 7", "**Score:** 7") is tolerated.
  while (i < text.size() && text[i] == '*') ++i;
  if (i >= text.size() || text[i] != ':') return std::string_view::npos;
  ++i;
  while (i < text.size() && text[i] == '*') ++i;
  return i;
}

std::string NormalizeValue(std::string_view raw) {
  constexpr std::string_view kStrip = " \t\r*\"'`<>[]";
  std::string_view v = raw;
  for (int pass = 0; pass < 2; ++pass) {
    std::size_t b = v.find_first_not_of(kStrip);
    if (b == std::string_view::npos) return "";
    std::size_t e = v.find_last_not_of(kStrip);
    v = v.substr(b, e - b + 1);
    while (!v.empty() && v.back() == '.') v.remove_suffix(1);
  }
  std::string out;
  bool gap = false;
  for (char c : v) {
    if (IsBlank(c)) {
      gap = !out.empty();
      continue;
    }
    if (gap) out += ' ';
    gap = false;
    out += Lower(c);
  }
  return out;
}

struct Occurrence {
  std::size_t pos = std::string_view::npos;
  std::string value;
};

Occurrence LastLabeled(std::string_view text, std::initializer_list<std::string_view> keys) {
  Occurrence last;
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    for (std::string_view key : keys) {
      std::size_t after = MatchLabel(text, pos, key);
      if (after == std::string_view::npos) continue;
      std::size_t eol = text.find('\n', after);
      if (eol == std::string_view::npos) eol = text.size();
      last = {pos, NormalizeValue(text.substr(after, eol - after))};
    }
  }
  return last;
}

void RequireScale(Scale scale) {
  if (!std::isfinite(scale.min) || !std::isfinite(scale.max) || !(scale.min < scale.max)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid scale");
  }
}

}  // namespace

const char* ParsedChoiceName(ParsedChoice choice) {
  switch (choice) {
    case ParsedChoice::kFirst: return "first";
    case ParsedChoice::kSecond: return "second";
    case ParsedChoice::kPreferred: return "preferred";
    case ParsedChoice::kRejected: return "rejected";
  }
  return "?";
}

ParsedRating ParseScore(std::string_view response, Scale scale) {
  RequireScale(scale);
  bool found = false;
  bool negative = false;
  std::string_view digits;
  for (std::size_t pos = 0; pos < response.size(); ++pos) {
    std::size_t i = MatchLabel(response, pos, "score");
    if (i == std::string_view::npos) continue;
    i = SkipBlanks(response, i);
    bool neg = false;
    if (i < response.size() && (response[i] == '-' || response[i] == '+')) {
      neg = response[i] == '-';
      ++i;
    }
    std::size_t start = i;
    while (i < response.size() && IsDigit(response[i])) ++i;
    bool int_part = i > start;
    std::size_t frac_digits = 0;
    if (i < response.size() && response[i] == '.') {
      std::size_t j = i + 1;
      while (j < response.size() && IsDigit(response[j])) ++j;
      frac_digits = j - i - 1;
      if (int_part || frac_digits > 0) i = j;
    }
    if (!int_part && frac_digits == 0) continue;
    found = true;
    negative = neg;
    digits = response.substr(start, i - start);
  }
  if (!found) throw Error(ErrorCode::kNoMatch, "no \"Score: <number>\" in response");

  std::string buf(digits);
  if (buf.front() == '.') buf.insert(buf.begin(), '0');
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec == std::errc::result_out_of_range) value = HUGE_VAL;
  if (negative) value = -value;
  if (!(value >= scale.min && value <= scale.max)) {
    std::ostringstream os;
    os << "score " << (negative ? "-" : "") << buf << " outside [" << scale.min << ", "
       << scale.max << "]";
    throw Error(ErrorCode::kOutOfScale, os.str());
  }
  return {value, scale};
}

ParsedChoice ParseChoice(std::string_view response, ChoiceKind kind) {
  Occurrence occ;
  std::map<std::string, ParsedChoice> admissible;
  switch (kind) {
    case ChoiceKind::kCaption12:
      occ = LastLabeled(response, {"better caption"});
      admissible = {{"1", ParsedChoice::kFirst}, {"2", ParsedChoice::kSecond}};
      break;
    case ChoiceKind::kAudioFirstSecond:
      occ = LastLabeled(response, {"better match"});
      admissible = {{"first audio", ParsedChoice::kFirst},
                    {"second audio", ParsedChoice::kSecond}};
      break;
    case ChoiceKind::kPreferredRejected:
      occ = LastLabeled(response, {"answer", "decision"});
      admissible = {{"preferred", ParsedChoice::kPreferred},
                    {"rejected", ParsedChoice::kRejected}};
      break;
  }
  if (occ.pos == std::string_view::npos) {
    throw Error(ErrorCode::kNoMatch, "no labeled answer in response");
  }
  auto it = admissible.find(occ.value);
  if (it == admissible.end()) {
    throw Error(ErrorCode::kAmbiguousValue, "inadmissible answer '" + occ.value + "'");
  }
  return it->second;
}

std::string FormatScore(double value) {
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  return "Score: " + std::string(buf, res.ptr);
}

std::string FormatChoice(ChoiceKind kind, ParsedChoice choice) {
  const bool first = choice == ParsedChoice::kFirst || choice == ParsedChoice::kPreferred;
  switch (kind) {
    case ChoiceKind::kCaption12: return std::string("Better Caption: ") + (first ? "1" : "2");
    case ChoiceKind::kAudioFirstSecond:
      return std::string("Better Match: ") + (first ? "first audio" : "second audio");
    case ChoiceKind::kPreferredRejected:
      return std::string("Answer: ") + (first ? "preferred" : "rejected");
  }
  return "";
}

std::vector<ParsedChoice> AdmissibleChoices(ChoiceKind kind) {
  if (kind == ChoiceKind::kPreferredRejected) {
    return {ParsedChoice::kPreferred, ParsedChoice::kRejected};
  }
  return {ParsedChoice::kFirst, ParsedChoice::kSecond};
}

const char* BaselineModeName(BaselineMode mode) {
  switch (mode) {
    case BaselineMode::kRate: return "rate";
    case BaselineMode::kPairChoose: return "pair_choose";
    case BaselineMode::kAcceptReject: return "accept_reject";
  }
  return "?";
}

BaselineMode ModeFor(const BenchmarkInstance& instance) {
  switch (KindOf(instance)) {
    case ManifestKind::kRating: return BaselineMode::kRate;
    case ManifestKind::kAudioPair:
    case ManifestKind::kTextPair: return BaselineMode::kPairChoose;
    case ManifestKind::kBinaryFeedback: return BaselineMode::kAcceptReject;
    default: break;
  }
  throw Error(ErrorCode::kIncompatibleMethod,
              std::string("no baseline judging mode for ") + ManifestKindName(KindOf(instance)));
}

namespace {

using Values = std::map<std::string, std::string>;

void CheckMode(const BenchmarkInstance& instance, BaselineMode mode) {
  if (ModeFor(instance) != mode) {
    throw Error(ErrorCode::kIncompatibleMethod,
                std::string(BaselineModeName(mode)) + " does not apply to " +
                    ManifestKindName(KindOf(instance)) + " instances");
  }
}

// Parses the judge's answer into the outcome, recording parse failures.
void Judge(BaselineOutcome& out, const BenchmarkInstance& instance, ChoiceKind choice_kind) {
  try {
    if (const auto* r = std::get_if<RatingInstance>(&instance)) {
      out.rating = ParseScore(out.response, r->scale).value;
    } else {
      out.choice = ParseChoice(out.response, choice_kind);
    }
  } catch (const Error& e) {
    out.failure = e.code();
    out.failure_message = e.what();
  }
}

ChoiceKind ChoiceKindFor(std::string_view template_id) {
  if (template_id.ends_with(".accept")) return ChoiceKind::kPreferredRejected;
  if (template_id == "prompting.choose.audio") return ChoiceKind::kAudioFirstSecond;
  return ChoiceKind::kCaption12;
}

std::string Stage(ErrorCode wrap, const char* what, const std::function<std::string()>& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!IsBackendError(e.code())) throw;
    throw Error(wrap, std::string(what) + ": " + e.what());
  }
}

}  // namespace

BaselineOutcome RunPromptingBaseline(Gateway& gateway, const PromptRegistry& registry,
                                     const BenchmarkInstance& instance, std::string_view family,
                                     BaselineMode mode) {
  CheckMode(instance, mode);
  BaselineOutcome out;
  out.template_id = registry.BaselineTemplate("prompting", family);
  std::vector<const AudioRef*> audios;
  Values values;
  if (const auto* r = std::get_if<RatingInstance>(&instance)) {
    audios = {&r->audio};
    values = {{"text", r->text}};
  } else if (const auto* p = std::get_if<AudioPairInstance>(&instance)) {
    audios = {&p->audio_first, &p->audio_second};
    values = {{"text", p->text}};
  } else if (const auto* t = std::get_if<TextPairInstance>(&instance)) {
    audios = {&t->audio};
    values = {{"audio_caption1", t->text_first}, {"audio_caption2", t->text_second}};
  } else if (const auto* b = std::get_if<BinaryFeedbackInstance>(&instance)) {
    audios = {&b->audio};
    values = {{"text", b->text}};
  }
  RenderedPrompt prompt = registry.RenderInstruction(out.template_id, values);
  out.response = gateway.Generate(audios, prompt, RequestKind::kGenerate);
  Judge(out, instance, ChoiceKindFor(out.template_id));
  return out;
}

BaselineOutcome RunCascadeBaseline(Gateway& gateway, const PromptRegistry& registry,
                                   const BenchmarkInstance& instance, std::string_view family,
                                   BaselineMode mode) {
  CheckMode(instance, mode);
  BaselineOutcome out;
  out.template_id = registry.BaselineTemplate("cascade", family);
  const RenderedPrompt caption_prompt =
      registry.RenderInstruction(registry.BaselineTemplate("cascade", "caption"), {});

  auto caption = [&](const AudioRef& audio) {
    std::string text = Stage(ErrorCode::kStage1Failure, "captioning", [&] {
      return gateway.Generate({&audio}, caption_prompt, RequestKind::kCaption);
    });
    out.captions.push_back(text);
    return text;
  };

  Values values;
  if (const auto* r = std::get_if<RatingInstance>(&instance)) {
    values = {{"ground_truth_description", r->text}, {"audio_caption", caption(r->audio)}};
  } else if (const auto* p = std::get_if<AudioPairInstance>(&instance)) {
    std::string c1 = caption(p->audio_first);
    std::string c2 = caption(p->audio_second);
    values = {{"ground_truth_description", p->text},
              {"audio_caption1", c1},
              {"audio_caption2", c2}};
  } else if (const auto* t = std::get_if<TextPairInstance>(&instance)) {
    // The clip's own caption is the reference; the candidates are judged against it.
    values = {{"ground_truth_description", caption(t->audio)},
              {"audio_caption1", t->text_first},
              {"audio_caption2", t->text_second}};
  } else if (const auto* b = std::get_if<BinaryFeedbackInstance>(&instance)) {
    values = {{"ground_truth_description", b->text}, {"audio_caption", caption(b->audio)}};
  }

  RenderedPrompt prompt;
  try {
    prompt = registry.RenderInstruction(out.template_id, values);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyDescription) throw;
    out.failure = ErrorCode::kStage1Failure;
    out.failure_message = std::string("blank caption: ") + e.what();
    return out;
  }
  out.response = Stage(ErrorCode::kStage2Failure, "judging", [&] {
    return gateway.Generate({}, prompt, RequestKind::kGenerate);
  });
  Judge(out, instance, ChoiceKindFor(out.template_id));
  return out;
}

}  // namespace aqa

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

#include "aqa/benchmark.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace aqa {
namespace {

using nlohmann::json;

struct LineContext {
  int line_no;
  const json& obj;
  const std::filesystem::path& base_dir;
  const LoadOptions& options;

  [[noreturn]] void Fail(const std::string& field, const std::string& why) const {
    throw ManifestError(ErrorCode::kSchemaViolation, line_no, field, why);
  }

  const json& Field(const std::string& name) const {
    auto it = obj.find(name);
    if (it == obj.end()) Fail(name, "missing");
    return *it;
  }

  std::string String(const std::string& name) const {
    const json& v = Field(name);
    if (!v.is_string()) Fail(name, "expected a string");
    std::string s = v.get<std::string>();
    if (s.find_first_not_of(" \t\r\n") == std::string::npos) Fail(name, "must not be blank");
    return s;
  }

  double Number(const json& v, const std::string& name) const {
    if (!v.is_number()) Fail(name, "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) Fail(name, "not finite");
    return d;
  }

  AudioRef Audio(const std::string& name) const {
    std::string locator = String(name);
    if (!options.load_audio) return UnloadedAudio(locator, base_dir);
    try {
      return LoadAudio(locator, base_dir);
    } catch (const Error& e) {
      Fail(name, e.what());
    }
  }

  HumanChoice Preference(const std::string& name) const {
    std::string s = String(name);
    if (s == "first") return HumanChoice::kFirst;
    if (s == "second") return HumanChoice::kSecond;
    Fail(name, "expected \"first\" or \"second\"");
  }

  int EventCount(const std::string& name) const {
    const json& v = Field(name);
    if (!v.is_number_integer()) Fail(name, "expected an integer");
    int n = v.get<int>();
    if (n != 2 && n != 3) Fail(name, "must be 2 or 3");
    return n;
  }

  std::string Family(const std::initializer_list<const char*> allowed) const {
    std::string s = String("benchmark");
    for (const char* a : allowed) {
      if (s == a) return s;
    }
    Fail("benchmark", "unsupported value '" + s + "'");
  }
};

bool SameClip(const AudioRef& a, const AudioRef& b) {
  if (a.loaded() && b.loaded()) return a.content_digest == b.content_digest;
  return a.path == b.path;
}

RatingInstance ParseRating(const LineContext& c, std::string id) {
  RatingInstance r;
  r.id = std::move(id);
  r.audio = c.Audio("audio");
  r.text = c.String("text");
  const json& scale = c.Field("scale");
  if (!scale.is_array() || scale.size() != 2) c.Fail("scale", "expected [min, max]");
  r.scale = {c.Number(scale[0], "scale"), c.Number(scale[1], "scale")};
  if (!(r.scale.min < r.scale.max)) c.Fail("scale", "min must be below max");
  const json& ratings = c.Field("ratings");
  if (!ratings.is_array() || ratings.empty()) c.Fail("ratings", "expected a non-empty array");
  for (const json& v : ratings) {
    double x = c.Number(v, "ratings");
    if (x < r.scale.min || x > r.scale.max) {
      std::ostringstream os;
      os << "rating " << x << " outside [" << r.scale.min << ", " << r.scale.max << "]";
      c.Fail("ratings", os.str());
    }
    r.ratings.push_back(x);
  }
  if (c.obj.contains("benchmark")) {
    r.family = c.Family({"relate", "pam"});
  } else if (r.scale.min == 0.0 && r.scale.max == 10.0) {
    r.family = "relate";
  } else if (r.scale.min == 1.0 && r.scale.max == 5.0) {
    r.family = "pam";
  }
  return r;
}

AudioPairInstance ParseAudioPair(const LineContext& c, std::string id) {
  AudioPairInstance p;
  p.id = std::move(id);
  p.text = c.String("text");
  p.audio_first = c.Audio("audio_first");
  p.audio_second = c.Audio("audio_second");
  if (SameClip(p.audio_first, p.audio_second)) c.Fail("audio_second", "same clip as audio_first");
  p.preference = c.Preference("preference");
  std::string source = c.String("source");
  if (source == "relate_pair" || source == "relate-pair") {
    p.source = PairSource::kRelatePair;
  } else if (source == "baton_pair" || source == "baton-pair") {
    p.source = PairSource::kBatonPair;
  } else {
    c.Fail("source", "expected \"relate_pair\" or \"baton_pair\"");
  }
  if (c.obj.contains("event_count") && !c.obj["event_count"].is_null()) {
    p.event_count = c.EventCount("event_count");
  }
  return p;
}

TextPairInstance ParseTextPair(const LineContext& c, std::string id) {
  static const std::map<std::string, TextPairSubset> kSubsets = {
      {"HC", TextPairSubset::kHC}, {"HI", TextPairSubset::kHI},
      {"HM", TextPairSubset::kHM}, {"MM", TextPairSubset::kMM},
      {"HH", TextPairSubset::kHH}, {"Hallucination", TextPairSubset::kHallucination}};
  TextPairInstance t;
  t.id = std::move(id);
  t.audio = c.Audio("audio");
  t.text_first = c.String("text_first");
  t.text_second = c.String("text_second");
  if (t.text_first == t.text_second) c.Fail("text_second", "identical to text_first");
  t.preference = c.Preference("preference");
  std::string subset = c.String("subset");
  auto it = kSubsets.find(subset);
  if (it == kSubsets.end()) c.Fail("subset", "unknown subset '" + subset + "'");
  t.subset = it->second;
  if (c.obj.contains("benchmark")) {
    t.family = c.Family({"fense", "brace"});
  } else {
    bool brace = t.subset == TextPairSubset::kHH || t.subset == TextPairSubset::kHallucination;
    t.family = brace ? "brace" : "fense";
  }
  return t;
}

BinaryFeedbackInstance ParseFeedback(const LineContext& c, std::string id) {
  BinaryFeedbackInstance b;
  b.id = std::move(id);
  b.audio = c.Audio("audio");
  b.text = c.String("text");
  std::string label = c.String("label");
  if (label == "preferred") {
    b.label = FeedbackLabel::kPreferred;
  } else if (label == "rejected") {
    b.label = FeedbackLabel::kRejected;
  } else {
    c.Fail("label", "expected \"preferred\" or \"rejected\"");
  }
  b.event_count = c.EventCount("event_count");
  return b;
}

CompaGroup ParseCompa(const LineContext& c, std::string id) {
  CompaGroup g;
  g.id = std::move(id);
  g.audio_1 = c.Audio("audio_1");
  g.audio_2 = c.Audio("audio_2");
  if (SameClip(g.audio_1, g.audio_2)) c.Fail("audio_2", "same clip as audio_1");
  g.text_1 = c.String("text_1");
  g.text_2 = c.String("text_2");
  if (g.text_1 == g.text_2) c.Fail("text_2", "identical to text_1");
  std::string task = c.String("task");
  if (task == "order") {
    g.task = CompaTask::kOrder;
  } else if (task == "attribute") {
    g.task = CompaTask::kAttribute;
  } else {
    c.Fail("task", "expected \"order\" or \"attribute\"");
  }
  return g;
}

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace

ManifestKind ParseManifestKind(std::string_view name) {
  if (name == "rating") return ManifestKind::kRating;
  if (name == "audio_pair") return ManifestKind::kAudioPair;
  if (name == "text_pair") return ManifestKind::kTextPair;
  if (name == "binary_feedback") return ManifestKind::kBinaryFeedback;
  if (name == "compa_group") return ManifestKind::kCompaGroup;
  if (name == "mixed") return ManifestKind::kMixed;
  throw Error(ErrorCode::kUnknownKind, "unknown manifest kind '" + std::string(name) + "'");
}

const char* ManifestKindName(ManifestKind kind) {
  switch (kind) {
    case ManifestKind::kRating: return "rating";
    case ManifestKind::kAudioPair: return "audio_pair";
    case ManifestKind::kTextPair: return "text_pair";
    case ManifestKind::kBinaryFeedback: return "binary_feedback";
    case ManifestKind::kCompaGroup: return "compa_group";
    case ManifestKind::kMixed: return "mixed";
  }
  return "?";
}

ManifestKind KindOf(const BenchmarkInstance& instance) {
  return static_cast<ManifestKind>(instance.index());
}

const char* SubsetName(TextPairSubset subset) {
  switch (subset) {
    case TextPairSubset::kHC: return "HC";
    case TextPairSubset::kHI: return "HI";
    case TextPairSubset::kHM: return "HM";
    case TextPairSubset::kMM: return "MM";
    case TextPairSubset::kHH: return "HH";
    case TextPairSubset::kHallucination: return "Hallucination";
  }
  return "?";
}

const char* PairSourceName(PairSource source) {
  return source == PairSource::kRelatePair ? "relate_pair" : "baton_pair";
}

const char* CompaTaskName(CompaTask task) {
  return task == CompaTask::kOrder ? "order" : "attribute";
}

std::vector<ManifestEntry> ParseManifest(std::string_view text, ManifestKind kind,
                                         const std::filesystem::path& base_dir,
                                         const LoadOptions& options) {
  std::vector<ManifestEntry> out;
  std::set<std::string> seen_ids;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) {
      throw ManifestError(ErrorCode::kMalformedLine, line_no, "", "not valid JSON");
    }
    if (!obj.is_object()) {
      throw ManifestError(ErrorCode::kMalformedLine, line_no, "", "expected a JSON object");
    }
    LineContext c{line_no, obj, base_dir, options};
    std::string kind_name = c.String("kind");
    ManifestKind line_kind;
    try {
      line_kind = ParseManifestKind(kind_name);
    } catch (const Error&) {
      c.Fail("kind", "unknown kind '" + kind_name + "'");
    }
    if (line_kind == ManifestKind::kMixed) c.Fail("kind", "\"mixed\" is not an instance kind");
    if (kind != ManifestKind::kMixed && line_kind != kind) {
      c.Fail("kind", "expected '" + std::string(ManifestKindName(kind)) + "', got '" +
                         kind_name + "'");
    }
    std::string id = c.String("id");
    if (!seen_ids.insert(id).second) c.Fail("id", "duplicate id '" + id + "'");

    ManifestEntry entry{line_no, RatingInstance{}};
    switch (line_kind) {
      case ManifestKind::kRating: entry.instance = ParseRating(c, id); break;
      case ManifestKind::kAudioPair: entry.instance = ParseAudioPair(c, id); break;
      case ManifestKind::kTextPair: entry.instance = ParseTextPair(c, id); break;
      case ManifestKind::kBinaryFeedback: entry.instance = ParseFeedback(c, id); break;
      case ManifestKind::kCompaGroup: entry.instance = ParseCompa(c, id); break;
      case ManifestKind::kMixed: break;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<ManifestEntry> LoadManifest(const std::filesystem::path& path, ManifestKind kind,
                                        const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open manifest " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseManifest(buf.str(), kind, path.parent_path(), options);
}

double RelateAggregate(const RatingInstance& instance) {
  Require(!instance.ratings.empty(), "rating instance without ratings");
  // Sorted summation keeps the mean identical under any permutation.
  std::vector<double> sorted = instance.ratings;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double r : sorted) sum += r;
  return sum / static_cast<double>(sorted.size());
}

std::vector<AudioPairInstance> BuildRelatePairs(std::span<const RatingInstance> instances,
                                                double threshold, std::uint64_t shuffle_seed) {
  Require(std::isfinite(threshold) && threshold >= 0.0, "threshold must be finite and >= 0");
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto [it, fresh] = groups.try_emplace(instances[i].text);
    if (fresh) order.push_back(instances[i].text);
    it->second.push_back(i);
  }
  std::mt19937_64 rng(shuffle_seed);
  std::vector<AudioPairInstance> out;
  for (const std::string& text : order) {
    const auto& members = groups[text];
    std::vector<double> means;
    for (std::size_t idx : members) means.push_back(RelateAggregate(instances[idx]));
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const RatingInstance& x = instances[members[a]];
        const RatingInstance& y = instances[members[b]];
        if (SameClip(x.audio, y.audio)) continue;
        if (!(std::fabs(means[a] - means[b]) > threshold)) continue;
        const bool x_better = means[a] > means[b];
        AudioPairInstance p;
        p.id = x.id + "~" + y.id;
        p.text = text;
        p.source = PairSource::kRelatePair;
        const bool swap = (rng() >> 63) != 0;
        p.audio_first = swap ? y.audio : x.audio;
        p.audio_second = swap ? x.audio : y.audio;
        p.preference = (x_better != swap) ? HumanChoice::kFirst : HumanChoice::kSecond;
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

std::vector<AudioPairInstance> BuildBatonPairs(std::span<const BinaryFeedbackInstance> feedback,
                                               std::uint64_t shuffle_seed) {
  using Key = std::pair<std::string, int>;
  std::vector<Key> order;
  std::map<Key, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < feedback.size(); ++i) {
    Key k{feedback[i].text, feedback[i].event_count};
    auto [it, fresh] = groups.try_emplace(k);
    if (fresh) order.push_back(k);
    it->second.push_back(i);
  }
  std::mt19937_64 rng(shuffle_seed);
  std::vector<AudioPairInstance> out;
  for (const Key& k : order) {
    const auto& members = groups[k];
    for (std::size_t pi : members) {
      const auto& pref = feedback[pi];
      if (pref.label != FeedbackLabel::kPreferred) continue;
      for (std::size_t ri : members) {
        const auto& rej = feedback[ri];
        if (rej.label != FeedbackLabel::kRejected) continue;
        AudioPairInstance p;
        p.id = pref.id + "~" + rej.id;
        p.text = k.first;
        p.source = PairSource::kBatonPair;
        p.event_count = k.second;
        const bool swap = (rng() >> 63) != 0;
        p.audio_first = swap ? rej.audio : pref.audio;
        p.audio_second = swap ? pref.audio : rej.audio;
        p.preference = swap ? HumanChoice::kSecond : HumanChoice::kFirst;
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

nlohmann::json ToManifestJson(const AudioPairInstance& pair) {
  json j = {{"kind", "audio_pair"},
            {"id", pair.id},
            {"text", pair.text},
            {"audio_first", pair.audio_first.locator},
            {"audio_second", pair.audio_second.locator},
            {"preference", pair.preference == HumanChoice::kFirst ? "first" : "second"},
            {"source", PairSourceName(pair.source)}};
  if (pair.event_count) j["event_count"] = *pair.event_count;
  return j;
}

std::string ToManifestText(std::span<const AudioPairInstance> pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += ToManifestJson(p).dump();
    out += '\n';
  }
  return out;
}

}  // namespace aqa

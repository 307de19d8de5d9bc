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

#include "aqa/mock_backend.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aqa/digest.h"
#include "aqa/error.h"

namespace aqa {
namespace {

using nlohmann::json;

std::string JoinAudioIds(const std::vector<const AudioRef*>& audios) {
  std::string id;
  for (const auto* a : audios) {
    if (!id.empty()) id += '+';
    id += a->content_digest;
  }
  return id;
}

std::string Hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string TruncateWords(const std::string& text, int max_words) {
  std::istringstream in(text);
  std::string word, out;
  int n = 0;
  while (n < max_words && in >> word) {
    if (!out.empty()) out += ' ';
    out += word;
    ++n;
  }
  return out;
}

}  // namespace

void MockOracleConfig::Validate() const {
  for (const auto& [key, p] : planted) {
    if (!(p > 0.0 && p < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "planted probability must lie strictly inside (0, 1)");
    }
  }
  if (embedding_dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "embedding_dim must be >= 1");
  }
}

std::string MockOracleConfig::Digest() const {
  FieldHasher h;
  h.Add("mock-v1").AddU64(seed).AddU64(static_cast<std::uint64_t>(embedding_dim));
  for (const auto& [key, p] : planted) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    h.Add(key.first).Add(key.second).Add(buf);
  }
  for (const auto& [key, text] : planted_generations) {
    h.Add(key.first).Add(key.second).Add(text);
  }
  return ToHex(h.Finish());
}

MockOracleConfig LoadMockConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open mock config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto base = path.parent_path();
  MockOracleConfig cfg;
  try {
    const json doc = json::parse(ss.str());
    cfg.seed = doc.value("seed", std::uint64_t{0});
    cfg.embedding_dim = doc.value("embedding_dim", 16);
    for (const auto& e : doc.value("planted", json::array())) {
      const auto audio = LoadAudio(e.at("audio").get<std::string>(), base);
      cfg.planted[{audio.content_digest, e.at("text").get<std::string>()}] =
          e.at("p").get<double>();
    }
    for (const auto& e : doc.value("generations", json::array())) {
      const auto audio = LoadAudio(e.at("audio").get<std::string>(), base);
      cfg.planted_generations[{audio.content_digest, e.at("template").get<std::string>()}] =
          e.at("text").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("mock config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

double MockProbability(std::uint64_t seed, const std::string& audio_id,
                       const std::string& prompt_text) {
  const std::string seed_str = std::to_string(seed);
  const std::uint64_t h = Hash64({"yesno", seed_str, audio_id, prompt_text});
  return static_cast<double>(50001 + h % 899999) / 1000000.0;
}

YesNoLogProbs MockYesNo(const MockOracleConfig& cfg, const std::string& audio_id,
                        const std::string& text_id, const std::string& prompt_text) {
  double p;
  if (auto it = cfg.planted.find({audio_id, text_id}); it != cfg.planted.end()) {
    p = it->second;
  } else {
    p = MockProbability(cfg.seed, audio_id, prompt_text);
  }
  return YesNoLogProbs(std::log(p), std::log1p(-p));
}

MockBackend::MockBackend(MockOracleConfig cfg) : cfg_(std::move(cfg)) { cfg_.Validate(); }

YesNoLogProbs MockBackend::YesNo(const YesNoRequest& request) {
  if (request.audio == nullptr || !request.audio->loaded()) {
    throw Error(ErrorCode::kAudioUnreadable, "mock yes/no needs a loaded audio");
  }
  return MockYesNo(cfg_, request.audio->content_digest, request.prompt.subject,
                   request.prompt.system_prompt + "\n" + request.prompt.user_prompt);
}

std::vector<double> MockBackend::Embed(const EmbedRequest& request) {
  std::string key;
  if (request.kind == EmbedKind::kAudio) {
    if (request.audio == nullptr || !request.audio->loaded()) {
      throw Error(ErrorCode::kAudioUnreadable, "mock embed needs a loaded audio");
    }
    key = "audio:" + request.audio->content_digest;
  } else {
    key = "text:" + request.text;
  }
  const std::string seed_str = std::to_string(cfg_.seed);
  std::vector<double> v(static_cast<std::size_t>(cfg_.embedding_dim));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::uint64_t h = Hash64({"embed", seed_str, key, std::to_string(i)});
    v[i] = static_cast<double>(static_cast<std::int64_t>(h % 2001) - 1000) / 1000.0;
  }
  return v;
}

std::string MockBackend::Generate(const GenerateRequest& request) {
  const std::string audio_id = JoinAudioIds(request.audios);
  const std::string& tid = request.prompt.template_id;
  if (auto it = cfg_.planted_generations.find({audio_id, tid});
      it != cfg_.planted_generations.end()) {
    return TruncateWords(it->second, request.max_new_tokens);
  }
  const std::string seed_str = std::to_string(cfg_.seed);
  std::string text;
  if (tid == "cascade.caption") {
    text = "mock caption " + Hex16(Hash64({"caption", seed_str, audio_id}));
  } else {
    const std::uint64_t h =
        Hash64({"generate", seed_str, audio_id, request.prompt.user_prompt});
    if (tid.ends_with(".rate.relate")) {
      text = "Score: " + std::to_string(h % 11);
    } else if (tid.ends_with(".rate.pam")) {
      text = "Score: " + std::to_string(1 + h % 5);
    } else if (tid.ends_with(".choose.caption") || tid == "cascade.choose.audio") {
      text = std::string("Better Caption: ") + (h % 2 == 0 ? "1" : "2");
    } else if (tid == "prompting.choose.audio") {
      text = std::string("Better Match: ") + (h % 2 == 0 ? "first audio" : "second audio");
    } else if (tid == "prompting.accept") {
      text = std::string("Answer: ") + (h % 2 == 0 ? "preferred" : "rejected");
    } else if (tid == "cascade.accept") {
      text = std::string("Decision: ") + (h % 2 == 0 ? "preferred" : "rejected");
    } else {
      text = "mock response " + Hex16(h);
    }
  }
  return TruncateWords(text, request.max_new_tokens);
}

}  // namespace aqa

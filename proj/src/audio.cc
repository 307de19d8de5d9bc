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

#include "aqa/audio.h"

#include <fstream>
#include <sstream>

#include "aqa/digest.h"
#include "aqa/error.h"

namespace aqa {
namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kAudioUnreadable, "no such audio file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kAudioUnreadable, "cannot open audio file: " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path Resolve(const std::string& locator, const std::filesystem::path& base) {
  std::filesystem::path p(locator);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

}  // namespace

AudioRef LoadAudio(const std::string& locator, const std::filesystem::path& base_dir,
                   const std::string& expected_digest) {
  AudioRef ref = UnloadedAudio(locator, base_dir);
  ref.content_digest = Sha256Hex(ReadFile(ref.path));
  if (!expected_digest.empty() && expected_digest != ref.content_digest) {
    throw Error(ErrorCode::kDigestMismatch, "digest mismatch for " + locator);
  }
  return ref;
}

AudioRef UnloadedAudio(const std::string& locator, const std::filesystem::path& base_dir) {
  return AudioRef{locator, Resolve(locator, base_dir), ""};
}

std::string ReadAudioBytes(const AudioRef& audio) {
  std::string bytes = ReadFile(audio.path);
  if (audio.loaded() && Sha256Hex(bytes) != audio.content_digest) {
    throw Error(ErrorCode::kDigestMismatch, "audio changed since load: " + audio.path.string());
  }
  return bytes;
}

}  // namespace aqa

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

#ifndef AQA_AUDIO_H_
#define AQA_AUDIO_H_

#include <filesystem>
#include <string>

namespace aqa {

// Reference to an audio clip. The digest is computed from the file bytes when
// the reference is loaded; caching and mock lookups key on it, not the path.
struct AudioRef {
  std::string locator;          // as written in the manifest
  std::filesystem::path path;   // resolved on disk
  std::string content_digest;   // hex SHA-256 of the bytes, empty if unloaded

  bool loaded() const { return !content_digest.empty(); }
};

// Reads the file and fills content_digest. If expected_digest is non-empty it
// must match. Throws kAudioUnreadable / kDigestMismatch.
AudioRef LoadAudio(const std::string& locator, const std::filesystem::path& base_dir,
                   const std::string& expected_digest = "");

// Unloaded reference (annotation-only workflows such as pair conversion).
AudioRef UnloadedAudio(const std::string& locator, const std::filesystem::path& base_dir);

// Re-reads the bytes and verifies them against content_digest.
std::string ReadAudioBytes(const AudioRef& audio);

}  // namespace aqa

#endif  // AQA_AUDIO_H_

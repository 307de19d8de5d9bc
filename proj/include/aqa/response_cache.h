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

#ifndef AQA_RESPONSE_CACHE_H_
#define AQA_RESPONSE_CACHE_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace aqa {

// SHA-256 over the length-prefixed fields in this fixed order. Hex encoded.
std::string CacheDigest(std::string_view audio_digest, std::string_view system_prompt,
                        std::string_view user_prompt, std::string_view backend_id,
                        std::string_view request_kind);

// Content-addressed response store. Always holds an in-memory map; when a
// directory is given, each record is also persisted as <dir>/<d0d1>/<digest>.json
// with fields {digest, request, response, timestamp, backend_id}.
// Writes go through a temp file and rename, so readers never see partial
// records. Values for a key are deterministic, so last writer wins.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir = {});

  std::optional<nlohmann::json> Lookup(const std::string& digest);
  void Store(const std::string& digest, const nlohmann::json& request_summary,
             const nlohmann::json& response, const std::string& backend_id);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path RecordPath(const std::string& digest) const;

 private:
  std::filesystem::path dir_;
  std::mutex mu_;
  std::map<std::string, nlohmann::json> memory_;
};

}  // namespace aqa

#endif  // AQA_RESPONSE_CACHE_H_

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

#include "aqa/response_cache.h"

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "aqa/digest.h"
#include "aqa/error.h"

namespace aqa {

std::string CacheDigest(std::string_view audio_digest, std::string_view system_prompt,
                        std::string_view user_prompt, std::string_view backend_id,
                        std::string_view request_kind) {
  FieldHasher h;
  h.Add("aqa-cache-v1")
      .Add(audio_digest)
      .Add(system_prompt)
      .Add(user_prompt)
      .Add(backend_id)
      .Add(request_kind);
  return ToHex(h.Finish());
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::kIoError, "cannot create cache dir " + dir_.string());
  }
}

std::filesystem::path ResponseCache::RecordPath(const std::string& digest) const {
  return dir_ / digest.substr(0, 2) / (digest + ".json");
}

std::optional<nlohmann::json> ResponseCache::Lookup(const std::string& digest) {
  {
    std::lock_guard lock(mu_);
    if (auto it = memory_.find(digest); it != memory_.end()) return it->second;
  }
  if (dir_.empty()) return std::nullopt;
  std::ifstream in(RecordPath(digest), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  auto record = nlohmann::json::parse(ss.str(), nullptr, false);
  // Unreadable or foreign records are treated as misses and get overwritten.
  if (record.is_discarded() || !record.is_object() || record.value("digest", "") != digest ||
      !record.contains("response")) {
    return std::nullopt;
  }
  std::lock_guard lock(mu_);
  memory_[digest] = record["response"];
  return record["response"];
}

void ResponseCache::Store(const std::string& digest, const nlohmann::json& request_summary,
                          const nlohmann::json& response, const std::string& backend_id) {
  {
    std::lock_guard lock(mu_);
    memory_[digest] = response;
  }
  if (dir_.empty()) return;
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  nlohmann::json record{
      {"digest", digest},
      {"request", request_summary},
      {"response", response},
      {"timestamp", std::chrono::duration_cast<std::chrono::seconds>(now).count()},
      {"backend_id", backend_id}};
  const auto path = RecordPath(digest);
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  static std::atomic<unsigned long long> counter{0};
  std::ostringstream tmp_name;
  tmp_name << path.filename().string() << ".tmp." << std::this_thread::get_id() << "."
           << counter.fetch_add(1);
  const auto tmp = path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write cache record " + tmp.string());
    out << record.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIoError, "cannot commit cache record " + path.string());
  }
}

}  // namespace aqa

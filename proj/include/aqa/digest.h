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

#ifndef AQA_DIGEST_H_
#define AQA_DIGEST_H_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace aqa {

using Sha256 = std::array<std::uint8_t, 32>;

Sha256 ComputeSha256(std::string_view bytes);
std::string ToHex(const Sha256& digest);
std::string Sha256Hex(std::string_view bytes);

// Incremental SHA-256 over length-prefixed fields. Each field is written as
// an 8-byte big-endian length followed by its bytes, so no two distinct field
// sequences share a serialization.
class FieldHasher {
 public:
  FieldHasher();
  ~FieldHasher();
  FieldHasher(const FieldHasher&) = delete;
  FieldHasher& operator=(const FieldHasher&) = delete;

  FieldHasher& Add(std::string_view field);
  FieldHasher& AddU64(std::uint64_t value);
  Sha256 Finish();

 private:
  void* ctx_;
};

// First 8 bytes of SHA-256 over the length-prefixed fields, big-endian.
std::uint64_t Hash64(std::initializer_list<std::string_view> fields);

std::string Base64Encode(std::string_view bytes);

}  // namespace aqa

#endif  // AQA_DIGEST_H_

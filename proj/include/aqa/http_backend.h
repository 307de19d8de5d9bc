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

#ifndef AQA_HTTP_BACKEND_H_
#define AQA_HTTP_BACKEND_H_

#include <string>

#include "aqa/backend.h"

namespace aqa {

struct HttpOptions {
  int timeout_ms = 120000;
  std::string bearer_token;  // sent as "Authorization: Bearer ..." when set
};

// Client for the JSON wire protocol. A fresh connection is opened per call,
// so one instance is safe to share across threads.
class HttpBackend : public Backend {
 public:
  HttpBackend(std::string base_url, HttpOptions options);

  YesNoLogProbs YesNo(const YesNoRequest& request) override;
  std::vector<double> Embed(const EmbedRequest& request) override;
  std::string Generate(const GenerateRequest& request) override;

 private:
  nlohmann::json Post(const char* path, const nlohmann::json& body) const;

  std::string base_url_;
  HttpOptions options_;
};

}  // namespace aqa

#endif  // AQA_HTTP_BACKEND_H_

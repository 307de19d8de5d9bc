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

#ifndef AQA_ERROR_H_
#define AQA_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace aqa {

enum class ErrorCode {
  kInvalidLogProb,
  kInvalidScore,
  kUnknownTemplate,
  kEmptyDescription,
  kKindMismatch,
  kUnknownFamily,
  kRegistryInvalid,
  kAudioUnreadable,
  kDigestMismatch,
  kBackendUnreachable,
  kBackendFailure,
  kProtocolViolation,
  kSurfaceFormMissing,
  kDimensionMismatch,
  kZeroNorm,
  kMalformedLine,
  kSchemaViolation,
  kUnknownKind,
  kConstantSeries,
  kLengthMismatch,
  kSingleClass,
  kEmptyList,
  kNoMatch,
  kOutOfScale,
  kAmbiguousValue,
  kStage1Failure,
  kStage2Failure,
  kIncompatibleMethod,
  kEmptyReportList,
  kInvalidArgument,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// True for failures that originate in model inference (network, server,
// protocol) rather than in user input. Drives the CLI exit code.
bool IsBackendError(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace aqa

#endif  // AQA_ERROR_H_

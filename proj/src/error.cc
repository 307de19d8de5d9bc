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

#include "aqa/error.h"

namespace aqa {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidLogProb: return "InvalidLogProb";
    case ErrorCode::kInvalidScore: return "InvalidScore";
    case ErrorCode::kUnknownTemplate: return "UnknownTemplate";
    case ErrorCode::kEmptyDescription: return "EmptyDescription";
    case ErrorCode::kKindMismatch: return "KindMismatch";
    case ErrorCode::kUnknownFamily: return "UnknownFamily";
    case ErrorCode::kRegistryInvalid: return "RegistryInvalid";
    case ErrorCode::kAudioUnreadable: return "AudioUnreadable";
    case ErrorCode::kDigestMismatch: return "DigestMismatch";
    case ErrorCode::kBackendUnreachable: return "BackendUnreachable";
    case ErrorCode::kBackendFailure: return "BackendFailure";
    case ErrorCode::kProtocolViolation: return "ProtocolViolation";
    case ErrorCode::kSurfaceFormMissing: return "SurfaceFormMissing";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroNorm: return "ZeroNorm";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kUnknownKind: return "UnknownKind";
    case ErrorCode::kConstantSeries: return "ConstantSeries";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kEmptyList: return "EmptyList";
    case ErrorCode::kNoMatch: return "NoMatch";
    case ErrorCode::kOutOfScale: return "OutOfScale";
    case ErrorCode::kAmbiguousValue: return "AmbiguousValue";
    case ErrorCode::kStage1Failure: return "Stage1Failure";
    case ErrorCode::kStage2Failure: return "Stage2Failure";
    case ErrorCode::kIncompatibleMethod: return "IncompatibleMethod";
    case ErrorCode::kEmptyReportList: return "EmptyReportList";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

bool IsBackendError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBackendUnreachable:
    case ErrorCode::kBackendFailure:
    case ErrorCode::kProtocolViolation:
    case ErrorCode::kSurfaceFormMissing:
    case ErrorCode::kStage1Failure:
    case ErrorCode::kStage2Failure:
      return true;
    default:
      return false;
  }
}

}  // namespace aqa

// Copyright (c) 2026 The gtp-mesh Authors
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

#include "gtp_mesh/error.hpp"

namespace gtp {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kUnknownPhoneme: return "UnknownPhoneme";
    case ErrorCode::kAdjacentBoundary: return "AdjacentBoundary";
    case ErrorCode::kNoRule: return "NoRule";
    case ErrorCode::kEmptyPronunciation: return "EmptyPronunciation";
    case ErrorCode::kUnknownVariant: return "UnknownVariant";
    case ErrorCode::kMissingAlignment: return "MissingAlignment";
    case ErrorCode::kTagLengthMismatch: return "TagLengthMismatch";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kOversize: return "Oversize";
    case ErrorCode::kTruncated: return "Truncated";
    case ErrorCode::kMalformedPayload: return "MalformedPayload";
    case ErrorCode::kSpawnFailed: return "SpawnFailed";
    case ErrorCode::kReadyTimeout: return "ReadyTimeout";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kBrokenPipe: return "BrokenPipe";
    case ErrorCode::kServiceUnavailable: return "ServiceUnavailable";
    case ErrorCode::kRemote: return "RemoteError";
    case ErrorCode::kZeroDuration: return "ZeroDuration";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kEmptyCases: return "EmptyCases";
    case ErrorCode::kZeroPer: return "ZeroPer";
  }
  return "Unknown";
}

}  // namespace gtp

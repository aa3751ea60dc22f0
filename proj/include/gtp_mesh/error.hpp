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

#ifndef GTP_MESH_ERROR_HPP_
#define GTP_MESH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gtp {

// Every failure raised by the core carries one of these codes. The C API
// maps them one-to-one onto gtp_status values.
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kParse,
  kUnknownPhoneme,
  kAdjacentBoundary,
  kNoRule,
  kEmptyPronunciation,
  kUnknownVariant,
  kMissingAlignment,
  kTagLengthMismatch,
  kEmptyCorpus,
  kOversize,
  kTruncated,
  kMalformedPayload,
  kSpawnFailed,
  kReadyTimeout,
  kTimeout,
  kBrokenPipe,
  kServiceUnavailable,
  kRemote,
  kZeroDuration,
  kEmptyReference,
  kEmptyCases,
  kZeroPer,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by parse_seq / inventory checks; keeps the offending label and its
// position so callers can report them.
class UnknownPhonemeError : public Error {
 public:
  UnknownPhonemeError(std::string label, size_t position)
      : Error(ErrorCode::kUnknownPhoneme,
              "unknown phoneme '" + label + "' at position " +
                  std::to_string(position)),
        label_(std::move(label)),
        position_(position) {}

  const std::string& label() const { return label_; }
  size_t position() const { return position_; }

 private:
  std::string label_;
  size_t position_;
};

class ParseError : public Error {
 public:
  ParseError(size_t line_no, const std::string& reason)
      : Error(ErrorCode::kParse,
              "line " + std::to_string(line_no) + ": " + reason),
        line_no_(line_no) {}

  size_t line_no() const { return line_no_; }

 private:
  size_t line_no_;
};

}  // namespace gtp

#endif  // GTP_MESH_ERROR_HPP_

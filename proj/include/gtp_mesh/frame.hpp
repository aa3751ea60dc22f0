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

#ifndef GTP_MESH_FRAME_HPP_
#define GTP_MESH_FRAME_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace gtp {

using Json = nlohmann::json;

// Wire layout: 4-byte big-endian payload length, then a UTF-8 JSON object
// {"id": u64, "op": string, "body": object} of exactly that many bytes.
inline constexpr uint32_t kMaxPayloadBytes = 16u * 1024u * 1024u;
inline constexpr size_t kFrameHeaderBytes = 4;

struct Frame {
  uint64_t id = 0;
  std::string op;
  Json body = Json::object();

  bool operator==(const Frame& other) const {
    return id == other.id && op == other.op && body == other.body;
  }
};

// Prefixes `payload` with its length. Throws Error(kOversize).
std::string EncodePayload(std::string_view payload);

// Throws Error(kOversize) or Error(kMalformedPayload) (e.g. invalid UTF-8).
std::string EncodeFrame(const Frame& frame);

// Validates a payload object. Throws Error(kMalformedPayload).
Frame ParsePayload(std::string_view payload);

struct DecodedFrame {
  Frame frame;
  size_t consumed = 0;  // always header + payload length
};

// Decodes the first frame in `bytes`. Throws Error(kTruncated) when fewer
// bytes are present than the header promises, Error(kOversize) for a length
// above the limit, Error(kMalformedPayload) for a bad payload.
DecodedFrame DecodeFrame(std::string_view bytes);

uint32_t ReadBigEndian32(const unsigned char* p);

// Blocking fd helpers. WriteAll throws Error(kBrokenPipe). ReadExact returns
// the number of bytes read before EOF (n on success).
void WriteAll(int fd, std::string_view data);
size_t ReadExact(int fd, char* buf, size_t n);

// Reads one frame. Returns nullopt on clean EOF before a header; throws
// Error(kTruncated) on EOF mid-frame, Error(kOversize) after discarding the
// oversized payload, Error(kMalformedPayload) after consuming a bad payload.
std::optional<Frame> ReadFrame(int fd);

}  // namespace gtp

#endif  // GTP_MESH_FRAME_HPP_

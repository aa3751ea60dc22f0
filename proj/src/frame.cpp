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

#include "gtp_mesh/frame.hpp"

#include <unistd.h>

#include <cerrno>
#include <vector>

#include "gtp_mesh/error.hpp"
#include "gtp_mesh/text.hpp"

namespace gtp {

uint32_t ReadBigEndian32(const unsigned char* p) {
  return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
         (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

std::string EncodePayload(std::string_view payload) {
  if (payload.size() > kMaxPayloadBytes) {
    throw Error(ErrorCode::kOversize,
                "payload of " + std::to_string(payload.size()) + " bytes exceeds limit");
  }
  const auto len = static_cast<uint32_t>(payload.size());
  std::string out;
  out.reserve(kFrameHeaderBytes + payload.size());
  out.push_back(static_cast<char>((len >> 24) & 0xFF));
  out.push_back(static_cast<char>((len >> 16) & 0xFF));
  out.push_back(static_cast<char>((len >> 8) & 0xFF));
  out.push_back(static_cast<char>(len & 0xFF));
  out.append(payload);
  return out;
}

std::string EncodeFrame(const Frame& frame) {
  if (!frame.body.is_object()) {
    throw Error(ErrorCode::kMalformedPayload, "frame body must be an object");
  }
  Json payload = {{"id", frame.id}, {"op", frame.op}, {"body", frame.body}};
  std::string text;
  try {
    text = payload.dump();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedPayload, e.what());
  }
  return EncodePayload(text);
}

Frame ParsePayload(std::string_view payload) {
  Json parsed = Json::parse(payload, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw Error(ErrorCode::kMalformedPayload, "payload is not a JSON object");
  }
  auto id = parsed.find("id");
  auto op = parsed.find("op");
  auto body = parsed.find("body");
  if (id == parsed.end() || !id->is_number_unsigned() || op == parsed.end() ||
      !op->is_string() || body == parsed.end() || !body->is_object()) {
    throw Error(ErrorCode::kMalformedPayload, "payload needs id, op and body");
  }
  Frame frame;
  frame.id = id->get<uint64_t>();
  frame.op = op->get<std::string>();
  frame.body = std::move(*body);
  return frame;
}

DecodedFrame DecodeFrame(std::string_view bytes) {
  if (bytes.size() < kFrameHeaderBytes) {
    throw Error(ErrorCode::kTruncated, "incomplete frame header");
  }
  const uint32_t len = ReadBigEndian32(reinterpret_cast<const unsigned char*>(bytes.data()));
  if (len > kMaxPayloadBytes) {
    throw Error(ErrorCode::kOversize, "frame length " + std::to_string(len) + " exceeds limit");
  }
  if (bytes.size() - kFrameHeaderBytes < len) {
    throw Error(ErrorCode::kTruncated, "frame promises " + std::to_string(len) + " bytes, has " +
                                           std::to_string(bytes.size() - kFrameHeaderBytes));
  }
  DecodedFrame out;
  out.frame = ParsePayload(bytes.substr(kFrameHeaderBytes, len));
  out.consumed = kFrameHeaderBytes + len;
  return out;
}

void WriteAll(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kBrokenPipe, "write failed: " + std::to_string(errno));
    }
    data.remove_prefix(static_cast<size_t>(n));
  }
}

size_t ReadExact(int fd, char* buf, size_t n) {
  size_t got = 0;
  while (got < n) {
    ssize_t r = ::read(fd, buf + got, n - got);
    if (r < 0) {
      if (errno == EINTR) continue;
      return got;
    }
    if (r == 0) return got;
    got += static_cast<size_t>(r);
  }
  return got;
}

std::optional<Frame> ReadFrame(int fd) {
  unsigned char header[kFrameHeaderBytes];
  size_t got = ReadExact(fd, reinterpret_cast<char*>(header), kFrameHeaderBytes);
  if (got == 0) return std::nullopt;
  if (got < kFrameHeaderBytes) throw Error(ErrorCode::kTruncated, "EOF inside frame header");
  const uint32_t len = ReadBigEndian32(header);
  if (len > kMaxPayloadBytes) {
    std::vector<char> sink(64 * 1024);
    size_t remaining = len;
    while (remaining > 0) {
      size_t chunk = std::min(remaining, sink.size());
      if (ReadExact(fd, sink.data(), chunk) < chunk) {
        throw Error(ErrorCode::kTruncated, "EOF inside oversized frame");
      }
      remaining -= chunk;
    }
    throw Error(ErrorCode::kOversize, "frame length " + std::to_string(len) + " exceeds limit");
  }
  std::string payload(len, '\0');
  if (ReadExact(fd, payload.data(), len) < len) {
    throw Error(ErrorCode::kTruncated, "EOF inside frame payload");
  }
  return ParsePayload(payload);
}

}  // namespace gtp

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

#ifndef GTP_MESH_TEXT_HPP_
#define GTP_MESH_TEXT_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gtp {

bool IsValidUtf8(std::string_view s);

// Splits a UTF-8 string into its Unicode scalars, each kept as its own UTF-8
// byte sequence. Invalid bytes come back as single-byte pieces.
std::vector<std::string> Utf8Scalars(std::string_view s);

// Decodes one scalar produced by Utf8Scalars; U+FFFD for invalid bytes.
char32_t DecodeScalar(std::string_view scalar);

bool IsUnicodeSpace(char32_t c);
bool IsUnicodePunct(char32_t c);

// Splits on ASCII whitespace, dropping empty pieces.
std::vector<std::string> SplitWhitespace(std::string_view s);

// Splits on a single character, keeping empty pieces.
std::vector<std::string> SplitChar(std::string_view s, char sep);

std::string_view TrimAscii(std::string_view s);

std::string JoinStrings(const std::vector<std::string>& parts,
                        std::string_view sep);

// Reads a whole file; throws Error(kIo) when it cannot be opened.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view content);

// Shortest round-trip decimal rendering of a double.
std::string FormatDouble(double v);
bool ParseDouble(std::string_view s, double* out);
bool ParseUint64(std::string_view s, uint64_t* out);

}  // namespace gtp

#endif  // GTP_MESH_TEXT_HPP_

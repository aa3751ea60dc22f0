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

#include "gtp_mesh/phoneme.hpp"

#include <algorithm>
#include <cctype>

#include "gtp_mesh/error.hpp"
#include "gtp_mesh/text.hpp"

namespace gtp {

std::string StripPunctuation(std::string_view surface) {
  std::vector<std::string> scalars = Utf8Scalars(surface);
  size_t begin = 0;
  size_t end = scalars.size();
  while (begin < end && IsUnicodePunct(DecodeScalar(scalars[begin]))) ++begin;
  while (end > begin && IsUnicodePunct(DecodeScalar(scalars[end - 1]))) --end;
  std::string out;
  for (size_t i = begin; i < end; ++i) out += scalars[i];
  return out;
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::string current;
  auto flush = [&]() {
    if (current.empty()) return;
    std::string stripped = StripPunctuation(current);
    current.clear();
    if (stripped.empty()) return;
    tokens.push_back(Token{std::move(stripped), tokens.size()});
  };
  for (const std::string& scalar : Utf8Scalars(text)) {
    if (IsUnicodeSpace(DecodeScalar(scalar))) {
      flush();
    } else {
      current += scalar;
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> Surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.surface);
  return out;
}

namespace {

bool IsValidLabel(std::string_view label) {
  if (label.empty()) return false;
  for (char c : label) {
    if (c == '|' || std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

PhonemeInventory::PhonemeInventory(std::vector<std::string> symbols,
                                   std::string ezafe_symbol)
    : ezafe_symbol_(std::move(ezafe_symbol)) {
  if (!IsValidLabel(ezafe_symbol_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid ezafe symbol '" + ezafe_symbol_ + "'");
  }
  for (std::string& s : symbols) {
    if (!IsValidLabel(s)) {
      throw Error(ErrorCode::kInvalidArgument, "invalid phoneme label '" + s + "'");
    }
    if (!index_.insert(s).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate phoneme label '" + s + "'");
    }
    symbols_.push_back(std::move(s));
  }
  if (index_.insert(ezafe_symbol_).second) symbols_.push_back(ezafe_symbol_);
}

PhonemeInventory PhonemeInventory::Parse(std::string_view content) {
  std::vector<std::string> symbols;
  std::string ezafe;
  bool seen_header = false;
  size_t line_no = 0;
  for (const std::string& raw : SplitChar(content, '\n')) {
    ++line_no;
    std::string_view line = TrimAscii(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line.substr(0, 6) != "ezafe=") {
        throw ParseError(line_no, "expected ezafe=<label> header");
      }
      ezafe = std::string(line.substr(6));
      seen_header = true;
      continue;
    }
    symbols.emplace_back(line);
  }
  if (!seen_header) throw ParseError(line_no, "missing ezafe=<label> header");
  try {
    return PhonemeInventory(std::move(symbols), std::move(ezafe));
  } catch (const Error& e) {
    throw ParseError(line_no, e.what());
  }
}

PhonemeInventory PhonemeInventory::Load(const std::string& path) {
  return Parse(ReadFile(path));
}

size_t PhonemeSequence::PhonemeCount() const {
  return static_cast<size_t>(std::count_if(
      items.begin(), items.end(), [](const std::string& s) { return !IsBoundary(s); }));
}

std::vector<std::string> PhonemeSequence::WordPhonemes(size_t w) const {
  if (!alignment || w >= alignment->size()) {
    throw Error(ErrorCode::kMissingAlignment, "no alignment for word " + std::to_string(w));
  }
  const Span& span = (*alignment)[w];
  return {items.begin() + static_cast<std::ptrdiff_t>(span.begin),
          items.begin() + static_cast<std::ptrdiff_t>(span.end)};
}

std::string SeqToText(const PhonemeSequence& seq) {
  return JoinStrings(seq.items, " ");
}

PhonemeSequence ParseSeq(std::string_view text, const PhonemeInventory& inv) {
  PhonemeSequence seq;
  seq.items = SplitWhitespace(text);
  for (size_t i = 0; i < seq.items.size(); ++i) {
    const std::string& item = seq.items[i];
    if (IsBoundary(item)) {
      if (i > 0 && IsBoundary(seq.items[i - 1])) {
        throw Error(ErrorCode::kAdjacentBoundary,
                    "adjacent boundary markers at position " + std::to_string(i));
      }
    } else if (!inv.Contains(item)) {
      throw UnknownPhonemeError(item, i);
    }
  }
  return seq;
}

PhonemeSequence FromWords(const std::vector<std::vector<std::string>>& words) {
  PhonemeSequence seq;
  std::vector<Span> spans;
  for (size_t w = 0; w < words.size(); ++w) {
    if (words[w].empty()) {
      throw Error(ErrorCode::kEmptyPronunciation,
                  "word " + std::to_string(w) + " has no phonemes");
    }
    if (w > 0) seq.items.emplace_back(kBoundary);
    Span span{seq.items.size(), seq.items.size() + words[w].size()};
    seq.items.insert(seq.items.end(), words[w].begin(), words[w].end());
    spans.push_back(span);
  }
  seq.alignment = std::move(spans);
  return seq;
}

PhonemeSequence AlignByBoundaries(PhonemeSequence seq) {
  std::vector<Span> spans;
  if (!seq.items.empty()) {
    if (IsBoundary(seq.items.front()) || IsBoundary(seq.items.back())) {
      throw Error(ErrorCode::kMissingAlignment,
                  "cannot align a sequence with a leading or trailing boundary");
    }
    size_t start = 0;
    for (size_t i = 0; i <= seq.items.size(); ++i) {
      if (i == seq.items.size() || IsBoundary(seq.items[i])) {
        if (i == start) {
          throw Error(ErrorCode::kAdjacentBoundary,
                      "adjacent boundary markers at position " + std::to_string(i));
        }
        spans.push_back(Span{start, i});
        start = i + 1;
      }
    }
  }
  seq.alignment = std::move(spans);
  return seq;
}

void CheckAlignment(const PhonemeSequence& seq) {
  if (!seq.alignment) {
    throw Error(ErrorCode::kMissingAlignment, "sequence has no alignment");
  }
  size_t cursor = 0;
  for (const Span& span : *seq.alignment) {
    if (span.begin > span.end || span.end > seq.items.size() || span.begin < cursor) {
      throw Error(ErrorCode::kMissingAlignment, "alignment spans out of order");
    }
    for (size_t i = cursor; i < span.begin; ++i) {
      if (!IsBoundary(seq.items[i])) {
        throw Error(ErrorCode::kMissingAlignment, "phoneme outside alignment");
      }
    }
    for (size_t i = span.begin; i < span.end; ++i) {
      if (IsBoundary(seq.items[i])) {
        throw Error(ErrorCode::kMissingAlignment, "boundary inside alignment span");
      }
    }
    cursor = span.end;
  }
  for (size_t i = cursor; i < seq.items.size(); ++i) {
    if (!IsBoundary(seq.items[i])) {
      throw Error(ErrorCode::kMissingAlignment, "phoneme outside alignment");
    }
  }
}

PhonemeSequence RewriteWords(
    const PhonemeSequence& seq,
    const std::function<void(size_t word, std::vector<std::string>& phonemes)>& edit) {
  CheckAlignment(seq);
  PhonemeSequence out;
  std::vector<Span> spans;
  size_t cursor = 0;
  for (size_t w = 0; w < seq.alignment->size(); ++w) {
    const Span& span = (*seq.alignment)[w];
    out.items.insert(out.items.end(), seq.items.begin() + static_cast<std::ptrdiff_t>(cursor),
                     seq.items.begin() + static_cast<std::ptrdiff_t>(span.begin));
    std::vector<std::string> phonemes = seq.WordPhonemes(w);
    edit(w, phonemes);
    spans.push_back(Span{out.items.size(), out.items.size() + phonemes.size()});
    out.items.insert(out.items.end(), phonemes.begin(), phonemes.end());
    cursor = span.end;
  }
  out.items.insert(out.items.end(), seq.items.begin() + static_cast<std::ptrdiff_t>(cursor),
                   seq.items.end());
  out.alignment = std::move(spans);
  return out;
}

bool IsValidSequence(const PhonemeSequence& seq, const PhonemeInventory& inv) {
  for (size_t i = 0; i < seq.items.size(); ++i) {
    if (IsBoundary(seq.items[i])) {
      if (i > 0 && IsBoundary(seq.items[i - 1])) return false;
    } else if (!inv.Contains(seq.items[i])) {
      return false;
    }
  }
  if (seq.alignment) {
    try {
      CheckAlignment(seq);
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

}  // namespace gtp

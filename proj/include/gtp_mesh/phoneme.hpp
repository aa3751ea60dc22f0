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

#ifndef GTP_MESH_PHONEME_HPP_
#define GTP_MESH_PHONEME_HPP_

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gtp {

struct Token {
  std::string surface;
  size_t index = 0;

  bool operator==(const Token&) const = default;
};

// Splits on Unicode whitespace and strips leading/trailing punctuation from
// each piece. Pieces that are all punctuation are dropped; indices stay
// consecutive.
std::vector<Token> Tokenize(std::string_view text);

// Applies the same punctuation strip Tokenize uses to a single surface.
std::string StripPunctuation(std::string_view surface);

std::vector<std::string> Surfaces(const std::vector<Token>& tokens);

inline constexpr std::string_view kBoundary = "|";

class PhonemeInventory {
 public:
  PhonemeInventory() = default;
  // Throws Error(kInvalidArgument) when a symbol is empty, duplicated, or
  // contains whitespace or '|'. The Ezafe symbol is added when not listed.
  PhonemeInventory(std::vector<std::string> symbols, std::string ezafe_symbol);

  // File format: first significant line "ezafe=<label>", then one label per
  // line. Lines starting with '#' are comments.
  static PhonemeInventory Parse(std::string_view content);
  static PhonemeInventory Load(const std::string& path);

  bool Contains(std::string_view label) const {
    return index_.find(label) != index_.end();
  }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& ezafe_symbol() const { return ezafe_symbol_; }

 private:
  std::vector<std::string> symbols_;
  std::set<std::string, std::less<>> index_;
  std::string ezafe_symbol_;
};

// Half-open range of item indices covering one word's phonemes.
struct Span {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

struct PhonemeSequence {
  // Phoneme labels interleaved with kBoundary markers.
  std::vector<std::string> items;
  // Word ordinal -> span over items, when known.
  std::optional<std::vector<Span>> alignment;

  size_t PhonemeCount() const;
  bool HasAlignment() const { return alignment.has_value(); }
  // Phoneme labels of word `w`; requires alignment.
  std::vector<std::string> WordPhonemes(size_t w) const;

  bool operator==(const PhonemeSequence&) const = default;
};

inline bool IsBoundary(std::string_view item) { return item == kBoundary; }

std::string SeqToText(const PhonemeSequence& seq);

// Inverse of SeqToText. Throws UnknownPhonemeError for labels outside `inv`
// and Error(kAdjacentBoundary) for "| |".
PhonemeSequence ParseSeq(std::string_view text, const PhonemeInventory& inv);

// Builds a sequence from per-word phonemes, one boundary between words, with
// alignment populated. Every word must be non-empty.
PhonemeSequence FromWords(const std::vector<std::vector<std::string>>& words);

// Derives alignment from boundary markers. Throws Error(kMissingAlignment) if
// the sequence starts or ends with a boundary.
PhonemeSequence AlignByBoundaries(PhonemeSequence seq);

// Throws Error(kMissingAlignment) when alignment is absent or does not
// partition the phoneme items in order.
void CheckAlignment(const PhonemeSequence& seq);

// Rebuilds `seq` letting `edit` rewrite each word's phonemes in place.
// Items outside word spans are copied unchanged and alignment is
// recomputed. Requires a valid alignment.
PhonemeSequence RewriteWords(
    const PhonemeSequence& seq,
    const std::function<void(size_t word, std::vector<std::string>& phonemes)>& edit);

// True when every label is in `inv`, no two boundaries are adjacent, and any
// alignment partitions the phoneme items.
bool IsValidSequence(const PhonemeSequence& seq, const PhonemeInventory& inv);

}  // namespace gtp

#endif  // GTP_MESH_PHONEME_HPP_

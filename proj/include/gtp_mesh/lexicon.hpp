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

#ifndef GTP_MESH_LEXICON_HPP_
#define GTP_MESH_LEXICON_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gtp_mesh/phoneme.hpp"

namespace gtp {

struct PronVariant {
  int id = 0;
  std::vector<std::string> phonemes;
  uint64_t prior_count = 0;

  bool operator==(const PronVariant&) const = default;
};

// Surface form -> pronunciation variants. Variant lists are kept sorted by
// descending prior_count (ties in insertion order) and ids are positions in
// that order, so variant 0 is always the most frequent pronunciation.
class Lexicon {
 public:
  using Entries = std::map<std::string, std::vector<PronVariant>, std::less<>>;

  // TSV: word<TAB>phonemes[<TAB>prior_count]; '#' comments; prior defaults
  // to 1. Duplicate (word, pronunciation) lines sum their counts. Phonemes
  // are checked against `inv` when it is non-null.
  static Lexicon Parse(std::string_view content, const PhonemeInventory* inv);
  static Lexicon Load(const std::string& path, const PhonemeInventory* inv);

  // Adds or merges one pronunciation and re-sorts the word's variants.
  void Add(const std::string& word, std::vector<std::string> phonemes,
           uint64_t prior_count);

  const std::vector<PronVariant>* Find(std::string_view word) const;
  bool IsHomograph(std::string_view word) const;
  const Entries& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

 private:
  Entries entries_;
  // Per word, the insertion rank of each pronunciation; used for tie-breaks.
  std::map<std::string, std::vector<std::vector<std::string>>, std::less<>> order_;
};

// Single-grapheme letter-to-sound rules.
class LtsTable {
 public:
  // Lines grapheme<TAB>phonemes (phonemes may be empty); '#' comments.
  static LtsTable Parse(std::string_view content, const PhonemeInventory* inv);
  static LtsTable Load(const std::string& path, const PhonemeInventory* inv);

  void Set(const std::string& grapheme, std::vector<std::string> phonemes);
  const std::vector<std::string>* Find(std::string_view grapheme) const;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> rules_;
};

struct TokenPhonemes {
  std::vector<std::string> phonemes;
  bool is_homograph = false;
  std::string word;
};

// Lexicon variant 0 when the word is listed, else the concatenated LTS
// output. Throws Error(kNoRule) for a grapheme without a rule and
// Error(kEmptyPronunciation) when the fallback yields nothing.
TokenPhonemes PhonemizeToken(const Token& token, const Lexicon& lex,
                             const LtsTable& lts);

struct HomographSite {
  size_t token_index = 0;
  std::string word;

  bool operator==(const HomographSite&) const = default;
};

struct BaseOutput {
  std::vector<Token> tokens;
  PhonemeSequence seq;  // aligned, one span per token
  std::vector<HomographSite> sites;
};

BaseOutput PhonemizeUtterance(std::string_view text, const Lexicon& lex,
                              const LtsTable& lts);

}  // namespace gtp

#endif  // GTP_MESH_LEXICON_HPP_

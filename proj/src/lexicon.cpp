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

#include "gtp_mesh/lexicon.hpp"

#include <algorithm>

#include "gtp_mesh/error.hpp"
#include "gtp_mesh/text.hpp"

namespace gtp {

namespace {

void CheckPhonemes(const std::vector<std::string>& phonemes,
                   const PhonemeInventory* inv) {
  if (inv == nullptr) return;
  for (size_t i = 0; i < phonemes.size(); ++i) {
    if (!inv->Contains(phonemes[i])) {
      throw UnknownPhonemeError(phonemes[i], i);
    }
  }
}

}  // namespace

void Lexicon::Add(const std::string& word, std::vector<std::string> phonemes,
                  uint64_t prior_count) {
  auto& variants = entries_[word];
  auto& order = order_[word];
  auto it = std::find_if(variants.begin(), variants.end(),
                         [&](const PronVariant& v) { return v.phonemes == phonemes; });
  if (it != variants.end()) {
    it->prior_count += prior_count;
  } else {
    order.push_back(phonemes);
    variants.push_back(PronVariant{0, std::move(phonemes), prior_count});
  }
  auto rank = [&](const PronVariant& v) {
    return std::find(order.begin(), order.end(), v.phonemes) - order.begin();
  };
  std::stable_sort(variants.begin(), variants.end(),
                   [&](const PronVariant& a, const PronVariant& b) {
                     if (a.prior_count != b.prior_count) {
                       return a.prior_count > b.prior_count;
                     }
                     return rank(a) < rank(b);
                   });
  for (size_t i = 0; i < variants.size(); ++i) variants[i].id = static_cast<int>(i);
}

Lexicon Lexicon::Parse(std::string_view content, const PhonemeInventory* inv) {
  Lexicon lex;
  size_t line_no = 0;
  for (const std::string& raw : SplitChar(content, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (TrimAscii(line).empty() || line.front() == '#') continue;
    std::vector<std::string> fields = SplitChar(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(line_no, "expected word<TAB>phonemes[<TAB>count]");
    }
    std::string word(TrimAscii(fields[0]));
    if (word.empty()) throw ParseError(line_no, "empty word");
    std::vector<std::string> phonemes = SplitWhitespace(fields[1]);
    if (phonemes.empty()) throw ParseError(line_no, "empty pronunciation");
    uint64_t count = 1;
    if (fields.size() == 3 && !ParseUint64(TrimAscii(fields[2]), &count)) {
      throw ParseError(line_no, "bad prior count '" + fields[2] + "'");
    }
    CheckPhonemes(phonemes, inv);
    lex.Add(word, std::move(phonemes), count);
  }
  return lex;
}

Lexicon Lexicon::Load(const std::string& path, const PhonemeInventory* inv) {
  return Parse(ReadFile(path), inv);
}

const std::vector<PronVariant>* Lexicon::Find(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Lexicon::IsHomograph(std::string_view word) const {
  const auto* variants = Find(word);
  return variants != nullptr && variants->size() > 1;
}

LtsTable LtsTable::Parse(std::string_view content, const PhonemeInventory* inv) {
  LtsTable table;
  size_t line_no = 0;
  for (const std::string& raw : SplitChar(content, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (TrimAscii(line).empty() || line.front() == '#') continue;
    std::vector<std::string> fields = SplitChar(line, '\t');
    if (fields.size() != 2) throw ParseError(line_no, "expected grapheme<TAB>phonemes");
    if (Utf8Scalars(fields[0]).size() != 1) {
      throw ParseError(line_no, "grapheme must be a single scalar");
    }
    std::vector<std::string> phonemes = SplitWhitespace(fields[1]);
    CheckPhonemes(phonemes, inv);
    table.Set(fields[0], std::move(phonemes));
  }
  return table;
}

LtsTable LtsTable::Load(const std::string& path, const PhonemeInventory* inv) {
  return Parse(ReadFile(path), inv);
}

void LtsTable::Set(const std::string& grapheme, std::vector<std::string> phonemes) {
  rules_[grapheme] = std::move(phonemes);
}

const std::vector<std::string>* LtsTable::Find(std::string_view grapheme) const {
  auto it = rules_.find(grapheme);
  return it == rules_.end() ? nullptr : &it->second;
}

TokenPhonemes PhonemizeToken(const Token& token, const Lexicon& lex,
                             const LtsTable& lts) {
  TokenPhonemes out;
  out.word = token.surface;
  if (const auto* variants = lex.Find(token.surface)) {
    out.phonemes = variants->front().phonemes;
    out.is_homograph = variants->size() > 1;
    return out;
  }
  for (const std::string& grapheme : Utf8Scalars(token.surface)) {
    const auto* rule = lts.Find(grapheme);
    if (rule == nullptr) {
      throw Error(ErrorCode::kNoRule, "no letter-to-sound rule for '" + grapheme + "'");
    }
    out.phonemes.insert(out.phonemes.end(), rule->begin(), rule->end());
  }
  if (out.phonemes.empty()) {
    throw Error(ErrorCode::kEmptyPronunciation,
                "'" + token.surface + "' has no phonemes");
  }
  return out;
}

BaseOutput PhonemizeUtterance(std::string_view text, const Lexicon& lex,
                              const LtsTable& lts) {
  BaseOutput out;
  out.tokens = Tokenize(text);
  std::vector<std::vector<std::string>> words;
  words.reserve(out.tokens.size());
  for (const Token& token : out.tokens) {
    TokenPhonemes tp;
    try {
      tp = PhonemizeToken(token, lex, lts);
    } catch (const Error& e) {
      throw Error(e.code(), "token " + std::to_string(token.index) + ": " + e.what());
    }
    if (tp.is_homograph) out.sites.push_back(HomographSite{token.index, tp.word});
    words.push_back(std::move(tp.phonemes));
  }
  out.seq = FromWords(words);
  return out;
}

}  // namespace gtp

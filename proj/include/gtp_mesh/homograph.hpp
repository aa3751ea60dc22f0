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

#ifndef GTP_MESH_HOMOGRAPH_HPP_
#define GTP_MESH_HOMOGRAPH_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gtp_mesh/lexicon.hpp"
#include "gtp_mesh/phoneme.hpp"

namespace gtp {

struct VariantStats {
  uint64_t prior_count = 0;
  std::map<std::string, uint64_t, std::less<>> cooc;

  bool operator==(const VariantStats&) const = default;
};

// Co-occurrence statistics per homograph; `variants[id]` holds the counts of
// lexicon variant `id`.
struct HomographDb {
  int window = 5;
  double alpha = 1.0;
  uint64_t vocab_size = 0;
  std::map<std::string, std::vector<VariantStats>, std::less<>> words;

  bool operator==(const HomographDb&) const = default;
};

struct AnnotatedToken {
  std::string surface;
  std::optional<int> variant;  // set for `word#<id>` tokens

  bool operator==(const AnnotatedToken&) const = default;
};

struct AnnotatedCorpus {
  std::vector<std::vector<AnnotatedToken>> utterances;

  // One utterance per line, whitespace-separated tokens, homographs written
  // as `word#<id>`.
  static AnnotatedCorpus Parse(std::string_view content);
  static AnnotatedCorpus Load(const std::string& path);
};

// Counts, for every annotated occurrence, its variant prior and the
// unannotated non-homograph tokens within +-window positions. Every lexicon
// homograph gets an entry, zero-filled when unseen. Throws
// Error(kUnknownVariant) for annotations the lexicon cannot resolve.
HomographDb BuildDb(const AnnotatedCorpus& corpus, const Lexicon& lex, int window,
                    double alpha);

// Smoothed naive-Bayes log score:
//   log(prior + a) + sum_c log((cooc_c + a) / (prior + a * V))
// with V = max(vocab_size, 1). `word` must be in the db.
double Score(const HomographDb& db, std::string_view word, int variant,
             const std::vector<std::string>& context);

// Surfaces within +-window of `site`, skipping the site itself and any other
// lexicon homograph.
std::vector<std::string> ContextWindow(const HomographDb& db, size_t site,
                                       const std::vector<std::string>& tokens,
                                       const Lexicon& lex);

struct Disambiguation {
  int variant = 0;
  bool fallback = false;  // word absent from db; variant 0 returned
};

// argmax of Score over the word's variants; ties go to the higher prior, then
// the lower id.
Disambiguation Disambiguate(const HomographDb& db, const HomographSite& site,
                            const std::vector<std::string>& tokens, const Lexicon& lex);

// Replaces each site's word span with the chosen variant's phonemes.
PhonemeSequence ApplyHomographs(const PhonemeSequence& seq,
                                const std::vector<HomographSite>& sites,
                                const std::vector<int>& choices, const Lexicon& lex);

std::string SerializeDb(const HomographDb& db);
HomographDb ParseDb(std::string_view content);
void SaveDb(const HomographDb& db, const std::string& path);
HomographDb LoadDb(const std::string& path);

}  // namespace gtp

#endif  // GTP_MESH_HOMOGRAPH_HPP_

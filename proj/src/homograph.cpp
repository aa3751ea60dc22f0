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

#include "gtp_mesh/homograph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gtp_mesh/error.hpp"
#include "gtp_mesh/text.hpp"

namespace gtp {

AnnotatedCorpus AnnotatedCorpus::Parse(std::string_view content) {
  AnnotatedCorpus corpus;
  size_t line_no = 0;
  for (const std::string& line : SplitChar(content, '\n')) {
    ++line_no;
    std::string_view trimmed = TrimAscii(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<AnnotatedToken> utterance;
    for (const std::string& piece : SplitWhitespace(trimmed)) {
      AnnotatedToken token;
      // Punctuation may trail the annotation ("read#1,").
      const std::string bare = StripPunctuation(piece);
      std::string_view surface = bare;
      size_t hash = bare.rfind('#');
      if (hash != std::string::npos && hash > 0 && hash + 1 < bare.size()) {
        uint64_t id = 0;
        if (!ParseUint64(surface.substr(hash + 1), &id) ||
            id > 1000000) {
          throw ParseError(line_no, "bad variant annotation '" + piece + "'");
        }
        token.variant = static_cast<int>(id);
        surface = surface.substr(0, hash);
      }
      token.surface = StripPunctuation(surface);
      if (token.surface.empty()) continue;
      utterance.push_back(std::move(token));
    }
    if (!utterance.empty()) corpus.utterances.push_back(std::move(utterance));
  }
  return corpus;
}

AnnotatedCorpus AnnotatedCorpus::Load(const std::string& path) {
  return Parse(ReadFile(path));
}

HomographDb BuildDb(const AnnotatedCorpus& corpus, const Lexicon& lex, int window,
                    double alpha) {
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "window must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be > 0");
  }
  HomographDb db;
  db.window = window;
  db.alpha = alpha;
  for (const auto& [word, variants] : lex.entries()) {
    if (variants.size() > 1) db.words[word].resize(variants.size());
  }

  std::set<std::string, std::less<>> vocab;
  for (const auto& utterance : corpus.utterances) {
    for (size_t i = 0; i < utterance.size(); ++i) {
      const AnnotatedToken& token = utterance[i];
      if (!token.variant) continue;
      const auto* variants = lex.Find(token.surface);
      if (variants != nullptr && variants->size() < 2) {
        throw Error(ErrorCode::kUnknownVariant,
                    "annotation on non-homograph '" + token.surface + "'");
      }
      if (variants == nullptr || *token.variant < 0 ||
          static_cast<size_t>(*token.variant) >= variants->size()) {
        throw Error(ErrorCode::kUnknownVariant,
                    "unknown variant " + token.surface + "#" +
                        std::to_string(*token.variant));
      }
      auto& stats = db.words[token.surface];
      if (stats.size() < variants->size()) stats.resize(variants->size());
      VariantStats& vs = stats[static_cast<size_t>(*token.variant)];
      ++vs.prior_count;

      size_t lo = i >= static_cast<size_t>(window) ? i - static_cast<size_t>(window) : 0;
      size_t hi = std::min(utterance.size(), i + static_cast<size_t>(window) + 1);
      for (size_t j = lo; j < hi; ++j) {
        if (j == i) continue;
        const AnnotatedToken& ctx = utterance[j];
        if (ctx.variant || lex.IsHomograph(ctx.surface)) continue;
        ++vs.cooc[ctx.surface];
        vocab.insert(ctx.surface);
      }
    }
  }
  db.vocab_size = vocab.size();
  return db;
}

double Score(const HomographDb& db, std::string_view word, int variant,
             const std::vector<std::string>& context) {
  auto it = db.words.find(word);
  if (it == db.words.end() || variant < 0 ||
      static_cast<size_t>(variant) >= it->second.size()) {
    throw Error(ErrorCode::kUnknownVariant,
                "no db entry for " + std::string(word) + "#" + std::to_string(variant));
  }
  const VariantStats& vs = it->second[static_cast<size_t>(variant)];
  const double prior = static_cast<double>(vs.prior_count);
  const double vocab = static_cast<double>(std::max<uint64_t>(db.vocab_size, 1));
  const double denom = std::log(prior + db.alpha * vocab);
  double score = std::log(prior + db.alpha);
  for (const std::string& c : context) {
    auto found = vs.cooc.find(c);
    double count = found == vs.cooc.end() ? 0.0 : static_cast<double>(found->second);
    score += std::log(count + db.alpha) - denom;
  }
  return score;
}

std::vector<std::string> ContextWindow(const HomographDb& db, size_t site,
                                       const std::vector<std::string>& tokens,
                                       const Lexicon& lex) {
  std::vector<std::string> context;
  const size_t window = static_cast<size_t>(std::max(db.window, 1));
  size_t lo = site >= window ? site - window : 0;
  size_t hi = std::min(tokens.size(), site + window + 1);
  for (size_t j = lo; j < hi; ++j) {
    if (j == site || lex.IsHomograph(tokens[j])) continue;
    context.push_back(tokens[j]);
  }
  return context;
}

Disambiguation Disambiguate(const HomographDb& db, const HomographSite& site,
                            const std::vector<std::string>& tokens, const Lexicon& lex) {
  auto it = db.words.find(site.word);
  if (it == db.words.end() || it->second.empty()) return {0, true};
  if (site.token_index >= tokens.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "site index " + std::to_string(site.token_index) + " out of range");
  }
  const std::vector<std::string> context = ContextWindow(db, site.token_index, tokens, lex);
  const auto& stats = it->second;
  int best = 0;
  double best_score = Score(db, site.word, 0, context);
  for (size_t v = 1; v < stats.size(); ++v) {
    double s = Score(db, site.word, static_cast<int>(v), context);
    if (s > best_score ||
        (s == best_score &&
         stats[v].prior_count > stats[static_cast<size_t>(best)].prior_count)) {
      best = static_cast<int>(v);
      best_score = s;
    }
  }
  return {best, false};
}

PhonemeSequence ApplyHomographs(const PhonemeSequence& seq,
                                const std::vector<HomographSite>& sites,
                                const std::vector<int>& choices, const Lexicon& lex) {
  if (!seq.alignment) {
    throw Error(ErrorCode::kMissingAlignment, "homograph splice needs alignment");
  }
  if (sites.size() != choices.size()) {
    throw Error(ErrorCode::kInvalidArgument, "sites and choices differ in length");
  }
  std::map<size_t, const std::vector<std::string>*> replacement;
  for (size_t k = 0; k < sites.size(); ++k) {
    const auto* variants = lex.Find(sites[k].word);
    if (variants == nullptr || choices[k] < 0 ||
        static_cast<size_t>(choices[k]) >= variants->size()) {
      throw Error(ErrorCode::kUnknownVariant,
                  "unknown variant " + sites[k].word + "#" + std::to_string(choices[k]));
    }
    if (sites[k].token_index >= seq.alignment->size()) {
      throw Error(ErrorCode::kMissingAlignment,
                  "site " + std::to_string(sites[k].token_index) + " has no span");
    }
    replacement[sites[k].token_index] =
        &(*variants)[static_cast<size_t>(choices[k])].phonemes;
  }
  return RewriteWords(seq, [&](size_t w, std::vector<std::string>& phonemes) {
    auto it = replacement.find(w);
    if (it != replacement.end()) phonemes = *it->second;
  });
}

namespace {

std::string EscapeContext(std::string_view word) {
  std::string out;
  for (char c : word) {
    switch (c) {
      case '%': out += "%25"; break;
      case ',': out += "%2C"; break;
      case ':': out += "%3A"; break;
      case '\t': out += "%09"; break;
      case '\n': out += "%0A"; break;
      default: out += c;
    }
  }
  return out;
}

std::string UnescapeContext(std::string_view word, size_t line_no) {
  std::string out;
  for (size_t i = 0; i < word.size(); ++i) {
    if (word[i] != '%') {
      out += word[i];
      continue;
    }
    if (i + 2 >= word.size()) throw ParseError(line_no, "bad escape in context word");
    std::string_view hex = word.substr(i + 1, 2);
    if (hex == "25") out += '%';
    else if (hex == "2C") out += ',';
    else if (hex == "3A") out += ':';
    else if (hex == "09") out += '\t';
    else if (hex == "0A") out += '\n';
    else throw ParseError(line_no, "bad escape in context word");
    i += 2;
  }
  return out;
}

}  // namespace

std::string SerializeDb(const HomographDb& db) {
  std::string out = "window=" + std::to_string(db.window) +
                    "\talpha=" + FormatDouble(db.alpha) +
                    "\tvocab=" + std::to_string(db.vocab_size) + "\n";
  for (const auto& [word, variants] : db.words) {
    for (size_t v = 0; v < variants.size(); ++v) {
      out += word;
      out += '\t';
      out += std::to_string(v);
      out += '\t';
      out += std::to_string(variants[v].prior_count);
      out += '\t';
      bool first = true;
      for (const auto& [ctx, count] : variants[v].cooc) {
        if (!first) out += ',';
        first = false;
        out += EscapeContext(ctx);
        out += ':';
        out += std::to_string(count);
      }
      out += '\n';
    }
  }
  return out;
}

HomographDb ParseDb(std::string_view content) {
  std::vector<std::string> lines = SplitChar(content, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, "empty homograph db");

  HomographDb db;
  std::vector<std::string> header = SplitChar(lines[0], '\t');
  if (header.size() != 3 || header[0].rfind("window=", 0) != 0 ||
      header[1].rfind("alpha=", 0) != 0 || header[2].rfind("vocab=", 0) != 0) {
    throw ParseError(1, "expected window=<n>\\talpha=<x>\\tvocab=<V> header");
  }
  uint64_t window = 0;
  if (!ParseUint64(std::string_view(header[0]).substr(7), &window) || window < 1 ||
      window > 1000000) {
    throw ParseError(1, "bad window");
  }
  db.window = static_cast<int>(window);
  if (!ParseDouble(std::string_view(header[1]).substr(6), &db.alpha) ||
      !(db.alpha > 0.0) || !std::isfinite(db.alpha)) {
    throw ParseError(1, "bad alpha");
  }
  if (!ParseUint64(std::string_view(header[2]).substr(6), &db.vocab_size)) {
    throw ParseError(1, "bad vocab");
  }

  for (size_t n = 1; n < lines.size(); ++n) {
    const size_t line_no = n + 1;
    std::vector<std::string> fields = SplitChar(lines[n], '\t');
    if (fields.size() != 4) throw ParseError(line_no, "expected 4 tab-separated fields");
    uint64_t variant = 0;
    uint64_t prior = 0;
    if (fields[0].empty()) throw ParseError(line_no, "empty word");
    if (!ParseUint64(fields[1], &variant) || !ParseUint64(fields[2], &prior)) {
      throw ParseError(line_no, "bad variant or prior");
    }
    auto& variants = db.words[fields[0]];
    if (variant != variants.size()) {
      throw ParseError(line_no, "variants must be listed in order from 0");
    }
    VariantStats vs;
    vs.prior_count = prior;
    if (!fields[3].empty()) {
      for (const std::string& pair : SplitChar(fields[3], ',')) {
        size_t colon = pair.rfind(':');
        uint64_t count = 0;
        if (colon == std::string::npos || colon == 0 ||
            !ParseUint64(std::string_view(pair).substr(colon + 1), &count)) {
          throw ParseError(line_no, "bad context entry '" + pair + "'");
        }
        vs.cooc[UnescapeContext(std::string_view(pair).substr(0, colon), line_no)] = count;
      }
    }
    variants.push_back(std::move(vs));
  }
  return db;
}

void SaveDb(const HomographDb& db, const std::string& path) {
  WriteFile(path, SerializeDb(db));
}

HomographDb LoadDb(const std::string& path) { return ParseDb(ReadFile(path)); }

}  // namespace gtp

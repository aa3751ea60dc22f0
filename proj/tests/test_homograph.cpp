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

#include <cmath>
#include <random>

#include "doctest.h"
#include "gtp_mesh/error.hpp"
#include "gtp_mesh/homograph.hpp"
#include "support.hpp"

using namespace gtp;

namespace {

std::vector<std::string> Items(std::initializer_list<const char*> xs) {
  return {xs.begin(), xs.end()};
}

PhonemeInventory Inv() {
  return PhonemeInventory({"r", "iy", "d", "eh", "w", "i", "l", "b", "uh", "k", "h", "ae",
                           "a", "o"},
                          "e");
}

Lexicon Lex(const PhonemeInventory& inv) {
  return Lexicon::Parse(
      "read\tr iy d\t10\nread\tr eh d\t7\nwill\tw i l\nbook\tb uh k\nhad\th ae d\n", &inv);
}

HomographDb TwoLineDb(const Lexicon& lex) {
  return BuildDb(AnnotatedCorpus::Parse("will read#0 book\nhad read#1 book\n"), lex, 2, 1.0);
}

// Hand-written copy of the scoring formula, evaluated term by term.
double ReferenceScore(double prior, const std::vector<double>& counts, double alpha, double V) {
  double s = std::log(prior + alpha);
  for (double c : counts) s += std::log((c + alpha) / (prior + alpha * V));
  return s;
}

}  // namespace

TEST_CASE("annotated corpus parsing") {
  const auto corpus = AnnotatedCorpus::Parse("# c\nwill read#0 book.\n\nhad read#1, book\n");
  REQUIRE(corpus.utterances.size() == 2);
  const auto& u = corpus.utterances[0];
  REQUIRE(u.size() == 3);
  CHECK(u[1].surface == "read");
  CHECK(u[1].variant == 0);
  CHECK_FALSE(u[0].variant.has_value());
  CHECK(u[2].surface == "book");
  CHECK(corpus.utterances[1][1].surface == "read");
  CHECK_THROWS_AS(AnnotatedCorpus::Parse("read#x\n"), ParseError);
}

TEST_CASE("build_db counts one pass over the corpus") {
  const auto inv = Inv();
  const Lexicon lex = Lex(inv);
  const HomographDb db = TwoLineDb(lex);
  CHECK(db.window == 2);
  CHECK(db.alpha == 1.0);
  CHECK(db.vocab_size == 3);
  const auto& read = db.words.at("read");
  REQUIRE(read.size() == 2);
  CHECK(read[0].prior_count == 1);
  CHECK(read[1].prior_count == 1);
  CHECK(read[0].cooc == std::map<std::string, uint64_t, std::less<>>{{"will", 1}, {"book", 1}});
  CHECK(read[1].cooc == std::map<std::string, uint64_t, std::less<>>{{"had", 1}, {"book", 1}});
}

TEST_CASE("build_db edge cases") {
  const auto inv = Inv();
  const Lexicon lex = Lex(inv);
  const HomographDb empty = BuildDb(AnnotatedCorpus{}, lex, 5, 1.0);
  REQUIRE(empty.words.count("read") == 1);
  for (const auto& vs : empty.words.at("read")) {
    CHECK(vs.prior_count == 0);
    CHECK(vs.cooc.empty());
  }
  try {
    BuildDb(AnnotatedCorpus::Parse("read#5 book\n"), lex, 5, 1.0);
    FAIL("expected UnknownVariant");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownVariant);
  }
  CHECK_THROWS_AS(BuildDb(AnnotatedCorpus::Parse("book#0\n"), lex, 5, 1.0), Error);
  CHECK_THROWS_AS(BuildDb(AnnotatedCorpus{}, lex, 0, 1.0), Error);
  CHECK_THROWS_AS(BuildDb(AnnotatedCorpus{}, lex, 1, 0.0), Error);
}

TEST_CASE("build_db honours the window radius") {
  const auto inv = Inv();
  const Lexicon lex = Lex(inv);
  const HomographDb db =
      BuildDb(AnnotatedCorpus::Parse("a b c read#0 x y z\n"), lex, 1, 1.0);
  CHECK(db.words.at("read")[0].cooc ==
        std::map<std::string, uint64_t, std::less<>>{{"c", 1}, {"x", 1}});
  // Repeated context words count once per position.
  const HomographDb rep = BuildDb(AnnotatedCorpus::Parse("the read#1 the\n"), lex, 3, 1.0);
  CHECK(rep.words.at("read")[1].cooc.at("the") == 2);
}

TEST_CASE("score follows the smoothed formula") {
  const auto inv = Inv();
  const HomographDb db = TwoLineDb(Lex(inv));
  CHECK(Score(db, "read", 0, {"will"}) == doctest::Approx(0.0));
  CHECK(Score(db, "read", 0, {"will"}) ==
        doctest::Approx(std::log(2.0) + std::log(2.0 / 4.0)));
  CHECK(Score(db, "read", 0, {}) == doctest::Approx(std::log(2.0)));
  CHECK(Score(db, "read", 0, {"will"}) > Score(db, "read", 1, {"will"}));
  CHECK(Score(db, "read", 1, {"will"}) == doctest::Approx(std::log(2.0) + std::log(1.0 / 4.0)));
  // Unseen context words are absorbed by smoothing.
  CHECK(std::isfinite(Score(db, "read", 1, {"never", "seen"})));
}

TEST_CASE("score matches the reference formula on random dbs") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    HomographDb db;
    db.alpha = 0.1 + static_cast<double>(rng() % 30) / 10.0;
    db.vocab_size = rng() % 6;
    VariantStats vs;
    vs.prior_count = rng() % 20;
    const std::vector<std::string> vocab = {"a", "b", "c", "d"};
    for (const auto& w : vocab) {
      if (rng() % 2) vs.cooc[w] = rng() % 10;
    }
    db.words["w"] = {vs};
    std::vector<std::string> ctx;
    std::vector<double> counts;
    const size_t n = rng() % 5;
    for (size_t i = 0; i < n; ++i) {
      const std::string c = vocab[rng() % vocab.size()];
      ctx.push_back(c);
      counts.push_back(vs.cooc.count(c) ? static_cast<double>(vs.cooc.at(c)) : 0.0);
    }
    const double V = static_cast<double>(std::max<uint64_t>(db.vocab_size, 1));
    REQUIRE(Score(db, "w", 0, ctx) ==
            doctest::Approx(ReferenceScore(static_cast<double>(vs.prior_count), counts,
                                           db.alpha, V)));
  }
}

TEST_CASE("disambiguate picks the best scoring variant") {
  const auto inv = Inv();
  const Lexicon lex = Lex(inv);
  const HomographDb db = TwoLineDb(lex);
  auto pick = [&](const std::string& text) {
    const auto tokens = Surfaces(Tokenize(text));
    return Disambiguate(db, HomographSite{1, "read"}, tokens, lex);
  };
  CHECK(pick("will read book").variant == 0);
  CHECK(pick("had read book").variant == 1);
  CHECK_FALSE(pick("had read book").fallback);

  const HomographDb zero = BuildDb(AnnotatedCorpus{}, lex, 5, 1.0);
  const auto tokens = Surfaces(Tokenize("had read book"));
  CHECK(Disambiguate(zero, HomographSite{1, "read"}, tokens, lex).variant == 0);

  const auto fb = Disambiguate(HomographDb{}, HomographSite{1, "read"}, tokens, lex);
  CHECK(fb.variant == 0);
  CHECK(fb.fallback);
}

TEST_CASE("tie-break prefers the higher prior, then the lower id") {
  const auto inv = Inv();
  const Lexicon lex = Lex(inv);
  const std::vector<std::string> tokens = {"x", "read"};
  // V=1, alpha=1, context [x] unseen: log(p+1) + log(1/(p+1)) = 0 for any p.
  HomographDb db;
  db.vocab_size = 1;
  db.words["read"] = {VariantStats{1, {}}, VariantStats{3, {}}};
  CHECK(Score(db, "read", 0, {"x"}) == Score(db, "read", 1, {"x"}));
  CHECK(Disambiguate(db, HomographSite{1, "read"}, tokens, lex).variant == 1);

  HomographDb tie;
  tie.vocab_size = 1;
  tie.words["read"] = {VariantStats{2, {}}, VariantStats{2, {}}};
  CHECK(Disambiguate(tie, HomographSite{1, "read"}, tokens, lex).variant == 0);
}

TEST_CASE("context window skips the site and other homographs") {
  const auto inv = Inv();
  const Lexicon lex = Lex(inv);
  HomographDb db;
  db.window = 2;
  const std::vector<std::string> tokens = {"a", "read", "b", "read", "c", "d", "e"};
  CHECK(ContextWindow(db, 3, tokens, lex) == Items({"b", "c", "d"}));
  CHECK(ContextWindow(db, 1, tokens, lex) == Items({"a", "b"}));
}

TEST_CASE("prior fallback with empty context") {
  std::mt19937_64 rng(4);
  const auto inv = Inv();
  const Lexicon lex = Lex(inv);
  for (int trial = 0; trial < 300; ++trial) {
    HomographDb db;
    db.vocab_size = rng() % 10;
    db.alpha = 0.5 + static_cast<double>(rng() % 4);
    const uint64_t p0 = rng() % 50, p1 = rng() % 50;
    db.words["read"] = {VariantStats{p0, {{"q", rng() % 9}}}, VariantStats{p1, {{"r", 3}}}};
    const int expected = p1 > p0 ? 1 : 0;
    REQUIRE(Disambiguate(db, HomographSite{0, "read"}, {"read"}, lex).variant == expected);
  }
}

TEST_CASE("separability on random balanced corpora") {
  std::mt19937_64 rng(21);
  const auto inv = Inv();
  const Lexicon lex = Lex(inv);
  for (int trial = 0; trial < 50; ++trial) {
    // Disjoint cue vocabularies per variant and equal occurrence counts.
    std::vector<std::string> cues[2];
    for (int v = 0; v < 2; ++v) {
      const size_t n = 2 + rng() % 5;
      for (size_t i = 0; i < n; ++i) cues[v].push_back("c" + std::to_string(v) + "_" + std::to_string(i));
    }
    std::string corpus;
    const int per_variant = 5 + static_cast<int>(rng() % 20);
    for (int v = 0; v < 2; ++v) {
      for (int k = 0; k < per_variant; ++k) {
        corpus += cues[v][rng() % cues[v].size()] + " read#" + std::to_string(v) + " " +
                  cues[v][rng() % cues[v].size()] + "\n";
      }
    }
    const HomographDb db = BuildDb(AnnotatedCorpus::Parse(corpus), lex, 3, 1.0);
    for (int v = 0; v < 2; ++v) {
      for (const std::string& cue : cues[v]) {
        if (db.words.at("read")[v].cooc.count(cue) == 0) continue;  // never sampled
        const std::vector<std::string> tokens = {cue, "read", "neutral"};
        REQUIRE(Disambiguate(db, HomographSite{1, "read"}, tokens, lex).variant == v);
      }
    }
  }
}

TEST_CASE("monotonicity of score in added evidence") {
  std::mt19937_64 rng(17);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 500; ++trial) {
    HomographDb db;
    db.alpha = 0.5 + static_cast<double>(rng() % 3);
    db.vocab_size = vocab.size();
    for (int v = 0; v < 2; ++v) {
      VariantStats vs;
      vs.prior_count = 1 + rng() % 20;
      for (const auto& w : vocab) vs.cooc[w] = rng() % (vs.prior_count + 1);
      db.words["w"].push_back(vs);
    }
    std::vector<std::string> ctx;
    const size_t n = 1 + rng() % 4;
    for (size_t i = 0; i < n; ++i) ctx.push_back(vocab[rng() % vocab.size()]);
    const std::string c = ctx[rng() % ctx.size()];

    const double margin = Score(db, "w", 0, ctx) - Score(db, "w", 1, ctx);
    HomographDb more = db;
    ++more.words["w"][0].cooc[c];
    REQUIRE(Score(more, "w", 0, ctx) - Score(more, "w", 1, ctx) >= margin);

    // A whole occurrence (prior and co-occurrence) with a single-word context.
    const double single = Score(db, "w", 0, {c}) - Score(db, "w", 1, {c});
    HomographDb occ = db;
    ++occ.words["w"][0].prior_count;
    ++occ.words["w"][0].cooc[c];
    REQUIRE(Score(occ, "w", 0, {c}) - Score(occ, "w", 1, {c}) >= single);
  }
}

TEST_CASE("apply_homographs splices the chosen variant") {
  const auto inv = Inv();
  const Lexicon lex = Lex(inv);
  const BaseOutput base = PhonemizeUtterance("will read", lex, LtsTable{});
  const auto sites = base.sites;
  CHECK(SeqToText(ApplyHomographs(base.seq, sites, {1}, lex)) == "w i l | r eh d");
  CHECK(ApplyHomographs(base.seq, sites, {0}, lex) == base.seq);

  PhonemeSequence unaligned = base.seq;
  unaligned.alignment.reset();
  try {
    ApplyHomographs(unaligned, sites, {1}, lex);
    FAIL("expected MissingAlignment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingAlignment);
  }
}

TEST_CASE("a shorter splice shifts later spans left") {
  const auto inv = Inv();
  const Lexicon lex = Lexicon::Parse("lead\tl iy d\t5\nlead\tl d\t1\n", &inv);
  const PhonemeSequence seq = FromWords({{"w", "i", "l"}, {"l", "iy", "d"}, {"b", "uh", "k"}});
  const PhonemeSequence out = ApplyHomographs(seq, {{1, "lead"}}, {1}, lex);
  CHECK(SeqToText(out) == "w i l | l d | b uh k");
  CHECK(*out.alignment == std::vector<Span>{{0, 3}, {4, 6}, {7, 10}});
}

TEST_CASE("db serialization round trips") {
  const auto inv = Inv();
  const HomographDb db = TwoLineDb(Lex(inv));
  const std::string text = SerializeDb(db);
  CHECK(text.rfind("window=2\talpha=1\tvocab=3\n", 0) == 0);
  CHECK(ParseDb(text) == db);

  gtp::testing::TempDir dir;
  SaveDb(db, dir.File("db.tsv"));
  CHECK(LoadDb(dir.File("db.tsv")) == db);

  WriteFile(dir.File("empty.tsv"), "");
  CHECK_THROWS_AS(LoadDb(dir.File("empty.tsv")), ParseError);
  CHECK_THROWS_AS(ParseDb("window=x\talpha=1\tvocab=0\n"), ParseError);
  CHECK_THROWS_AS(ParseDb("window=2\talpha=1\tvocab=0\nread\t1\t0\t\n"), ParseError);
}

TEST_CASE("100 random dbs round trip") {
  std::mt19937_64 rng(8);
  const std::vector<std::string> words = {"read", "lead", "live", "\xDA\xA9\xD8\xB1\xD9\x85"};
  const std::vector<std::string> ctx = {"a", "b,c", "x:y", "50%", "t\tab", "\xD8\xA7\xD8\xB2", "n\nl"};
  for (int trial = 0; trial < 100; ++trial) {
    HomographDb db;
    db.window = 1 + static_cast<int>(rng() % 9);
    db.alpha = static_cast<double>(1 + rng() % 1000) / 7.0;
    db.vocab_size = rng() % 100;
    for (const auto& w : words) {
      if (rng() % 3 == 0) continue;
      const size_t n_var = 1 + rng() % 3;
      for (size_t v = 0; v < n_var; ++v) {
        VariantStats vs;
        vs.prior_count = rng() % 1000;
        for (const auto& c : ctx) {
          if (rng() % 2) vs.cooc[c] = 1 + rng() % 50;
        }
        db.words[w].push_back(vs);
      }
    }
    REQUIRE(ParseDb(SerializeDb(db)) == db);
  }
}

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

#include "doctest.h"
#include "gtp_mesh/error.hpp"
#include "gtp_mesh/lexicon.hpp"
#include "support.hpp"

using namespace gtp;

namespace {

std::vector<std::string> Items(std::initializer_list<const char*> xs) {
  return {xs.begin(), xs.end()};
}

PhonemeInventory Inv() {
  return PhonemeInventory({"r", "iy", "d", "eh", "w", "i", "l", "m", "a", "n", "b", "o", "k",
                           "uh", "h", "ae"},
                          "e");
}

Lexicon ReadLexicon(const PhonemeInventory& inv) {
  return Lexicon::Parse("read\tr iy d\t10\nread\tr eh d\t7\nwill\tw i l\n", &inv);
}

LtsTable ManLts(const PhonemeInventory& inv) {
  return LtsTable::Parse("m\tm\na\ta\nn\tn\n", &inv);
}

}  // namespace

TEST_CASE("load_lexicon orders variants by prior") {
  const auto inv = Inv();
  const Lexicon lex = ReadLexicon(inv);
  const auto* read = lex.Find("read");
  REQUIRE(read != nullptr);
  REQUIRE(read->size() == 2);
  CHECK((*read)[0] == PronVariant{0, Items({"r", "iy", "d"}), 10});
  CHECK((*read)[1] == PronVariant{1, Items({"r", "eh", "d"}), 7});
  CHECK(lex.IsHomograph("read"));
  CHECK_FALSE(lex.IsHomograph("will"));
  CHECK((*lex.Find("will"))[0].prior_count == 1);
}

TEST_CASE("load_lexicon edge cases") {
  const auto inv = Inv();
  CHECK(Lexicon::Parse("", &inv).size() == 0);
  CHECK(Lexicon::Parse("# only a comment\n\n", &inv).size() == 0);
  try {
    Lexicon::Parse("book\tb o q\n", &inv);
    FAIL("expected UnknownPhoneme");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownPhoneme);
  }
  try {
    Lexicon::Parse("ok\tk\n\nbad line\n", &inv);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line_no() == 3);
  }
  CHECK_THROWS_AS(Lexicon::Parse("w\tk\tnotanumber\n", &inv), ParseError);
  CHECK_THROWS_AS(Lexicon::Parse("w\t\t3\n", &inv), ParseError);
  CHECK_THROWS_AS(Lexicon::Load("/nonexistent/lexicon.tsv", &inv), Error);
}

TEST_CASE("duplicate lines merge counts and re-sort") {
  const auto inv = Inv();
  const Lexicon lex =
      Lexicon::Parse("read\tr iy d\t4\nread\tr eh d\t7\nread\tr iy d\t5\n", &inv);
  const auto& v = *lex.Find("read");
  REQUIRE(v.size() == 2);
  CHECK(v[0].phonemes == Items({"r", "iy", "d"}));
  CHECK(v[0].prior_count == 9);
  CHECK(v[1].prior_count == 7);
}

TEST_CASE("equal priors keep insertion order") {
  const auto inv = Inv();
  const Lexicon lex = Lexicon::Parse("read\tr eh d\t3\nread\tr iy d\t3\n", &inv);
  const auto& v = *lex.Find("read");
  CHECK(v[0].phonemes == Items({"r", "eh", "d"}));
  CHECK(v[0].id == 0);
  CHECK(v[1].id == 1);
}

TEST_CASE("variant lists satisfy ordering invariants on random inserts") {
  std::mt19937_64 rng(5);
  const std::vector<std::vector<std::string>> prons = {
      {"r", "iy", "d"}, {"r", "eh", "d"}, {"r", "a", "d"}, {"r", "o", "d"}};
  for (int trial = 0; trial < 200; ++trial) {
    Lexicon lex;
    std::map<std::vector<std::string>, uint64_t> totals;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      const auto& p = prons[rng() % prons.size()];
      const uint64_t c = rng() % 5;
      lex.Add("read", p, c);
      totals[p] += c;
    }
    const auto& v = *lex.Find("read");
    REQUIRE(v.size() == totals.size());
    for (size_t i = 0; i < v.size(); ++i) {
      REQUIRE(v[i].id == static_cast<int>(i));
      REQUIRE(v[i].prior_count == totals[v[i].phonemes]);
      if (i > 0) REQUIRE(v[i - 1].prior_count >= v[i].prior_count);
    }
  }
}

TEST_CASE("phonemize_token picks the highest prior variant") {
  const auto inv = Inv();
  const Lexicon lex = ReadLexicon(inv);
  const LtsTable lts = ManLts(inv);
  const auto read = PhonemizeToken(Token{"read", 0}, lex, lts);
  CHECK(read.phonemes == Items({"r", "iy", "d"}));
  CHECK(read.is_homograph);
  CHECK(read.word == "read");

  const auto man = PhonemizeToken(Token{"man", 0}, lex, lts);
  CHECK(man.phonemes == Items({"m", "a", "n"}));
  CHECK_FALSE(man.is_homograph);

  try {
    PhonemizeToken(Token{"xyz", 0}, lex, lts);
    FAIL("expected NoRule");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoRule);
    CHECK(std::string(e.what()).find("'x'") != std::string::npos);
  }
}

TEST_CASE("LTS works per Unicode scalar and may map to nothing") {
  const auto inv = Inv();
  LtsTable lts = LtsTable::Parse("\xDA\xA9\tk\n\xD8\xA7\ta\nh\t\n", &inv);
  const Lexicon lex;
  CHECK(PhonemizeToken(Token{"\xDA\xA9\xD8\xA7h", 0}, lex, lts).phonemes ==
        Items({"k", "a"}));
  try {
    PhonemizeToken(Token{"hh", 0}, lex, lts);
    FAIL("expected EmptyPronunciation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyPronunciation);
  }
  CHECK_THROWS_AS(LtsTable::Parse("ab\tk\n", &inv), ParseError);
  CHECK_THROWS_AS(LtsTable::Parse("q\tzz\n", &inv), Error);
}

TEST_CASE("phonemize_utterance aligns tokens and records sites") {
  const auto inv = Inv();
  const Lexicon lex = ReadLexicon(inv);
  const LtsTable lts = ManLts(inv);
  const BaseOutput out = PhonemizeUtterance("will read", lex, lts);
  CHECK(SeqToText(out.seq) == "w i l | r iy d");
  CHECK(out.sites == std::vector<HomographSite>{{1, "read"}});
  CHECK(*out.seq.alignment == std::vector<Span>{{0, 3}, {4, 7}});

  const BaseOutput empty = PhonemizeUtterance("", lex, lts);
  CHECK(empty.seq.items.empty());
  CHECK(empty.sites.empty());

  const BaseOutput three = PhonemizeUtterance("man, will read.", lex, lts);
  CHECK(std::count(three.seq.items.begin(), three.seq.items.end(), "|") == 2);
  for (size_t w = 0; w < three.tokens.size(); ++w) {
    CHECK(three.seq.WordPhonemes(w) ==
          PhonemizeToken(three.tokens[w], lex, lts).phonemes);
  }
}

TEST_CASE("phonemize_utterance attaches the token index to errors") {
  const auto inv = Inv();
  const Lexicon lex = ReadLexicon(inv);
  const LtsTable lts = ManLts(inv);
  try {
    PhonemizeUtterance("will read xyz", lex, lts);
    FAIL("expected NoRule");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoRule);
    CHECK(std::string(e.what()).rfind("token 2: ", 0) == 0);
  }
}

TEST_CASE("base output is deterministic and biased to variant 0") {
  const auto inv = PhonemeInventory::Load(gtp::testing::DataPath("inventory.txt"));
  const Lexicon lex = Lexicon::Load(gtp::testing::DataPath("lexicon.tsv"), &inv);
  const LtsTable lts = LtsTable::Load(gtp::testing::DataPath("lts.tsv"), &inv);
  gtp::testing::FixtureGrammar grammar(3);
  for (int i = 0; i < 200; ++i) {
    const std::string text = grammar.Utterance();
    const BaseOutput a = PhonemizeUtterance(text, lex, lts);
    const BaseOutput b = PhonemizeUtterance(text, lex, lts);
    REQUIRE(SeqToText(a.seq) == SeqToText(b.seq));
    REQUIRE(a.seq.alignment->size() == a.tokens.size());
    for (const HomographSite& s : a.sites) {
      REQUIRE(a.seq.WordPhonemes(s.token_index) == (*lex.Find(s.word))[0].phonemes);
    }
  }
}

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

#include <random>

#include "doctest.h"
#include "gtp_mesh/error.hpp"
#include "gtp_mesh/phoneme.hpp"
#include "support.hpp"

using namespace gtp;
using gtp::testing::RandomAlignedSequence;
using gtp::testing::SmallInventory;

namespace {

std::vector<std::string> Items(std::initializer_list<const char*> xs) {
  return {xs.begin(), xs.end()};
}

}  // namespace

TEST_CASE("tokenize splits on whitespace and keeps order") {
  const auto toks = Tokenize("will read book");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0] == Token{"will", 0});
  CHECK(toks[1] == Token{"read", 1});
  CHECK(toks[2] == Token{"book", 2});
  CHECK(Tokenize("").empty());
}

TEST_CASE("tokenize strips edge punctuation") {
  CHECK(Surfaces(Tokenize("read, book.")) == Items({"read", "book"}));
  CHECK(Surfaces(Tokenize("  \"quoted\"  (x) ")) == Items({"quoted", "x"}));
  // Inner punctuation stays; all-punctuation pieces vanish, indices stay dense.
  const auto toks = Tokenize("don't -- stop!");
  REQUIRE(toks.size() == 2);
  CHECK(toks[0].surface == "don't");
  CHECK(toks[1] == Token{"stop", 1});
}

TEST_CASE("tokenize handles Unicode spaces and Arabic-script punctuation") {
  // U+00A0 no-break space, U+3000 ideographic space, Arabic comma and question mark.
  const auto toks = Tokenize("\xD8\xB3\xD9\x84\xD8\xA7\xD9\x85\xD8\x8C\xC2\xA0"
                             "\xDA\xA9\xD8\xAA\xD8\xA7\xD8\xA8\xD8\x9F\xE3\x80\x80ok");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].surface == "\xD8\xB3\xD9\x84\xD8\xA7\xD9\x85");
  CHECK(toks[1].surface == "\xDA\xA9\xD8\xAA\xD8\xA7\xD8\xA8");
  CHECK(toks[2].surface == "ok");
}

TEST_CASE("tokenize is idempotent on its joined output") {
  std::mt19937_64 rng(11);
  const std::string alphabet = "ab ,.!?\t-'\"xy\n";
  for (int trial = 0; trial < 1000; ++trial) {
    std::string text;
    const size_t n = rng() % 30;
    for (size_t i = 0; i < n; ++i) text += alphabet[rng() % alphabet.size()];
    const auto once = Surfaces(Tokenize(text));
    const auto twice = Surfaces(Tokenize(JoinStrings(once, " ")));
    REQUIRE(once == twice);
    for (const auto& s : once) REQUIRE(!s.empty());
  }
}

TEST_CASE("inventory validates labels and carries the ezafe symbol") {
  const PhonemeInventory inv({"k", "e", "t"}, "e");
  CHECK(inv.Contains("k"));
  CHECK_FALSE(inv.Contains("|"));
  CHECK(inv.ezafe_symbol() == "e");

  const PhonemeInventory implicit({"k"}, "e");
  CHECK(implicit.Contains("e"));

  CHECK_THROWS_AS(PhonemeInventory({"k", "k"}, "e"), Error);
  CHECK_THROWS_AS(PhonemeInventory({"a b"}, "e"), Error);
  CHECK_THROWS_AS(PhonemeInventory({"|"}, "e"), Error);
  CHECK_THROWS_AS(PhonemeInventory({""}, "e"), Error);
  CHECK_THROWS_AS(PhonemeInventory({"k"}, ""), Error);
}

TEST_CASE("inventory file format") {
  const auto inv = PhonemeInventory::Parse("# comment\nezafe=e\nk\n\ne\nt\n");
  CHECK(inv.symbols() == Items({"k", "e", "t"}));
  CHECK(inv.ezafe_symbol() == "e");
  CHECK_THROWS_AS(PhonemeInventory::Parse("k\ne\n"), ParseError);
  CHECK_THROWS_AS(PhonemeInventory::Load("/nonexistent/inventory.txt"), Error);
  const auto shipped = PhonemeInventory::Load(gtp::testing::DataPath("inventory.txt"));
  CHECK(shipped.ezafe_symbol() == "e");
  CHECK(shipped.Contains("y"));
}

TEST_CASE("seq_to_text renders labels and boundaries") {
  PhonemeSequence seq;
  seq.items = Items({"k", "e", "t", "A", "b", "|", "m", "a", "n"});
  CHECK(SeqToText(seq) == "k e t A b | m a n");
  CHECK(SeqToText(PhonemeSequence{}) == "");
}

TEST_CASE("parse_seq accepts known labels and rejects the rest") {
  const PhonemeInventory inv({"k", "e"}, "e");
  CHECK(ParseSeq("k e", inv).items == Items({"k", "e"}));
  try {
    ParseSeq("k z", inv);
    FAIL("expected UnknownPhoneme");
  } catch (const UnknownPhonemeError& e) {
    CHECK(e.label() == "z");
    CHECK(e.position() == 1);
    CHECK(e.code() == ErrorCode::kUnknownPhoneme);
  }
  try {
    ParseSeq("k | | e", inv);
    FAIL("expected AdjacentBoundary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAdjacentBoundary);
  }
  CHECK(ParseSeq("", inv).items.empty());
  CHECK(ParseSeq("  k \t e ", inv).items == Items({"k", "e"}));
}

TEST_CASE("round trip of random valid sequences") {
  const auto inv = SmallInventory();
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const PhonemeSequence seq = RandomAlignedSequence(rng, inv);
    const PhonemeSequence back = ParseSeq(SeqToText(seq), inv);
    REQUIRE(back.items == seq.items);
    REQUIRE(AlignByBoundaries(back) == seq);
  }
}

TEST_CASE("FromWords builds alignment that partitions the phonemes") {
  const auto seq = FromWords({{"k", "e"}, {"t"}, {"A", "b"}});
  CHECK(SeqToText(seq) == "k e | t | A b");
  REQUIRE(seq.alignment);
  CHECK(*seq.alignment == std::vector<Span>{{0, 2}, {3, 4}, {5, 7}});
  CHECK(seq.PhonemeCount() == 5);
  CHECK(seq.WordPhonemes(2) == Items({"A", "b"}));
  CHECK_NOTHROW(CheckAlignment(seq));
  CHECK_THROWS_AS(FromWords({{"k"}, {}}), Error);
  CHECK(FromWords({}).items.empty());
}

TEST_CASE("alignment checks") {
  const PhonemeInventory inv({"k", "e", "t"}, "e");
  PhonemeSequence seq = ParseSeq("k e | t", inv);
  CHECK_FALSE(seq.HasAlignment());
  try {
    CheckAlignment(seq);
    FAIL("expected MissingAlignment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingAlignment);
  }
  seq.alignment = std::vector<Span>{{0, 1}, {3, 4}};  // skips "e"
  CHECK_THROWS_AS(CheckAlignment(seq), Error);
  CHECK_FALSE(IsValidSequence(seq, inv));
  seq.alignment = std::vector<Span>{{0, 2}, {3, 4}};
  CHECK_NOTHROW(CheckAlignment(seq));
  CHECK(IsValidSequence(seq, inv));
  seq.alignment = std::vector<Span>{{3, 4}, {0, 2}};  // out of order
  CHECK_THROWS_AS(CheckAlignment(seq), Error);
  CHECK_THROWS_AS(AlignByBoundaries(ParseSeq("| k", inv)), Error);
  CHECK_THROWS_AS(AlignByBoundaries(ParseSeq("k |", inv)), Error);
}

TEST_CASE("random alignments partition non-boundary items exactly") {
  const auto inv = SmallInventory();
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const auto seq = RandomAlignedSequence(rng, inv);
    std::vector<bool> covered(seq.items.size(), false);
    size_t prev_end = 0;
    for (const Span& s : *seq.alignment) {
      REQUIRE(s.begin >= prev_end);
      for (size_t i = s.begin; i < s.end; ++i) {
        REQUIRE_FALSE(covered[i]);
        covered[i] = true;
      }
      prev_end = s.end;
    }
    for (size_t i = 0; i < seq.items.size(); ++i) {
      REQUIRE(covered[i] == (seq.items[i] != kBoundary));
    }
  }
}

TEST_CASE("RewriteWords recomputes spans") {
  const auto seq = FromWords({{"k", "e", "t"}, {"m"}, {"a", "n"}});
  const auto out = RewriteWords(seq, [](size_t w, std::vector<std::string>& ph) {
    if (w == 0) ph = {"k"};
  });
  CHECK(SeqToText(out) == "k | m | a n");
  CHECK(*out.alignment == std::vector<Span>{{0, 1}, {2, 3}, {4, 6}});
}

TEST_CASE("error code names") {
  CHECK(std::string(ErrorCodeName(ErrorCode::kUnknownPhoneme)) == "UnknownPhoneme");
  CHECK(std::string(ErrorCodeName(ErrorCode::kZeroPer)) == "ZeroPer");
}

// Copyright 2026 The isodub Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "doctest.h"
#include "isodub/cli/toy_corpus.h"
#include "isodub/common/error.h"
#include "isodub/p2w/lexicon.h"

using namespace isodub;
using namespace isodub::p2w;

namespace {

Pronunciation ph(std::string_view s) {
  Pronunciation out;
  std::string cur;
  for (const char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

PronLexicon cats_lexicon() {
  return PronLexicon::parse(
      ";;; toy entries\n"
      "CATS  K AE1 T S\n"
      "CAT'S  K AE1 T S\n"
      "CAT  K AE1 T\n"
      "AND  AE1 N D\n"
      "AND  AH0 N D\n"
      "DOG  D AO1 G\n");
}

}  // namespace

TEST_CASE("lexicon file format") {
  const auto lex = cats_lexicon();
  CHECK(lex.size() == 5);
  REQUIRE(lex.find("And") != nullptr);
  CHECK(lex.find("and")->size() == 2);
  CHECK(lex.find("horse") == nullptr);
  CHECK(PronLexicon::parse(lex.serialize()) == lex);
  CHECK(lex.serialize().find("CAT'S  K AE1 T S\n") != std::string::npos);
  CHECK_THROWS_AS(PronLexicon::parse("LONELY\n"), DataError);
  PronLexicon l;
  CHECK_THROWS_AS(l.add("x", {}), DataError);
  l.add("x", ph("K S"));
  l.add("X", ph("K S"));  // duplicate pronunciation collapses
  CHECK(l.find("x")->size() == 1);
}

TEST_CASE("inverse lexicon") {
  const auto inv = invert_lexicon(cats_lexicon());
  CHECK(inv.at("K AE1 T S") == std::set<std::string>{"cats", "cat's"});
  CHECK(inv.at("D AO1 G") == std::set<std::string>{"dog"});
  CHECK(inv.at("AE1 N D") == std::set<std::string>{"and"});
  CHECK(invert_back(inv) == cats_lexicon());
  CHECK(pronunciation_key(ph("K AE1 T S")) == "K AE1 T S");
}

TEST_CASE("K AE1 T S resolves by frequency") {
  const auto lex = cats_lexicon();
  const PhonesToWords by_cats(lex, {{"cats", 10}, {"cat's", 3}});
  const auto m = by_cats.lookup(ph("K AE1 T S"));
  CHECK(m.word == "cats");
  CHECK(m.kind == MatchKind::kExact);
  const PhonesToWords by_possessive(lex, {{"cats", 2}, {"cat's", 7}});
  CHECK(by_possessive.lookup(ph("K AE1 T S")).word == "cat's");
  // Equal counts: lexicographic order (' sorts before s).
  const PhonesToWords tied(lex, {{"cats", 4}, {"cat's", 4}});
  CHECK(tied.lookup(ph("K AE1 T S")).word == "cat's");
  // Missing counts count as zero.
  const PhonesToWords none(lex, {{"cats", 1}});
  CHECK(none.lookup(ph("K AE1 T S")).word == "cats");
}

TEST_CASE("alternative pronunciations map to the same word") {
  const PhonesToWords p(cats_lexicon(), {{"and", 5}});
  CHECK(p.lookup(ph("AE1 N D")).word == "and");
  CHECK(p.lookup(ph("AH0 N D")).word == "and");
}

TEST_CASE("near matches and OOV markers") {
  const PhonesToWords p(cats_lexicon(), {{"cats", 3}, {"cat", 5}, {"dog", 1}});
  SUBCASE("stress difference only") {
    const auto m = p.lookup(ph("D AO0 G"));
    CHECK(m.word == "dog");
    CHECK(m.kind == MatchKind::kNearest);
    CHECK(m.distance == 0);
  }
  SUBCASE("one substitution") {
    const auto m = p.lookup(ph("D AO1 K"));
    CHECK(m.word == "dog");
    CHECK(m.distance == 1);
  }
  SUBCASE("one deletion prefers the more frequent of equally near words") {
    // "K AE1 S" is one edit from both CAT and CATS.
    CHECK(p.lookup(ph("K AE1 S")).word == "cat");
  }
  SUBCASE("too far") {
    const auto m = p.lookup(ph("Z Z Z"));
    CHECK(m.kind == MatchKind::kOov);
    CHECK(m.word == "z_z_z");
    CHECK(oov_marker(ph("AH0 B")) == "ah0_b");
  }
  SUBCASE("threshold zero disables fuzzy matching") {
    const PhonesToWords strict(cats_lexicon(), {}, 0);
    CHECK(strict.lookup(ph("D AO1 K")).kind == MatchKind::kOov);
    CHECK(strict.lookup(ph("D AO0 G")).word == "dog");
  }
}

TEST_CASE("edit distance") {
  CHECK(edit_distance(ph("A B C"), ph("A B C")) == 0);
  CHECK(edit_distance(ph("A B C"), ph("A C")) == 1);
  CHECK(edit_distance(ph("A B C"), ph("X B Y")) == 2);
  CHECK(edit_distance(ph(""), ph("A B")) == 2);
  CHECK(edit_distance(ph("K AE1 T"), ph("T AE1 K")) == 2);
}

TEST_CASE("decoded targets to text") {
  codec::DecodedTarget t;
  t.words = {{{{"L", 10}, {"EH1", 6}, {"T", 15}}},
             {{{"W", 4}, {"EH1", 6}, {"L", 7}}},
             {{{"AH0", 7}, {"L", 6}, {"OW1", 8}, {"N", 7}}}};
  PronLexicon lex;
  lex.add("let", ph("L EH1 T"));
  lex.add("well", ph("W EH1 L"));
  lex.add("alone", ph("AH0 L OW1 N"));
  const PhonesToWords p(lex, {});
  CHECK(p.words(t) == std::vector<std::string>{"let", "well", "alone"});
  CHECK(p.text(t) == "let well alone");
}

TEST_CASE("word counts") {
  corpus::TrainingRecord a, b;
  a.target_words = {"The", "cat", "the"};
  b.target_words = {"cat's"};
  const std::vector<corpus::TrainingRecord> recs{a, b};
  const auto c = count_words(recs);
  CHECK(c == WordCounts{{"cat", 1}, {"cat's", 1}, {"the", 2}});
  CHECK(parse_counts(serialize_counts(c)) == c);
  CHECK_THROWS_AS(parse_counts("the\n"), DataError);
  CHECK_THROWS_AS(parse_counts("the x\n"), DataError);
  CHECK_THROWS_AS(parse_counts("the -1\n"), DataError);
}

TEST_CASE("recovery rates against an independent count") {
  const auto lex = cli::toy_lexicon();
  // Uniform counts except that plain plurals outnumber possessives.
  WordCounts counts;
  for (const auto& [w, prons] : lex.entries()) counts[w] = w.find('\'') == std::string::npos ? 10 : 2;
  const auto report = measure_recovery(lex, counts);

  std::size_t unamb = 0, total = 0, expect_recovered = 0;
  for (const auto& [w, prons] : lex.entries())
    for (const auto& p : prons) {
      ++total;
      std::vector<std::string> sharing;
      for (const auto& [w2, prons2] : lex.entries())
        for (const auto& p2 : prons2)
          if (p2 == p) sharing.push_back(w2);
      if (sharing.size() == 1) ++unamb;
      // Winner: highest count, then smallest string.
      std::string best = sharing[0];
      for (const auto& s : sharing)
        if (counts[s] > counts[best] || (counts[s] == counts[best] && s < best)) best = s;
      expect_recovered += best == w;
    }
  CHECK(report.total == total);
  CHECK(report.unambiguous_total == unamb);
  CHECK(report.recovered == expect_recovered);
  CHECK(report.unambiguous_recovered == unamb);
  CHECK(report.unambiguous_rate() == doctest::Approx(1.0));
  CHECK(report.rate() >= 0.95);
}

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


#include <cmath>
#include <random>

#include "bleu_oracle.h"
#include "doctest.h"
#include "isodub/metrics/metrics.h"

using namespace isodub;
using namespace isodub::metrics;
using isodub::testing::oracle_bleu;

TEST_CASE("speech overlap hand values") {
  CHECK(speech_overlap(2000, 2000) == 1.0);
  CHECK(speech_overlap(2000, 1500) == 0.75);
  CHECK(speech_overlap(2000, 2500) == 0.75);
  CHECK(speech_overlap(1000, 2500) == -0.5);
  CHECK(speech_overlap(1000, 0) == 0.0);
  CHECK_THROWS_AS(speech_overlap(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(speech_overlap(-5, 10), std::invalid_argument);
}

TEST_CASE("corpus speech overlap is the mean over segments") {
  const std::vector<SegmentPair> one{{2000, 1500}};
  CHECK(corpus_speech_overlap(one) == 0.75);
  const std::vector<SegmentPair> two{{1000, 1000}, {1000, 500}};
  CHECK(corpus_speech_overlap(two) == 0.75);
  CHECK_THROWS(corpus_speech_overlap(std::vector<SegmentPair>{}));

  std::mt19937_64 rng(100);
  std::uniform_real_distribution<double> src(200, 5000), ratio(0.2, 2.5);
  std::vector<SegmentPair> many;
  double sum = 0;
  for (int i = 0; i < 100; ++i) {
    const double s = src(rng), d = s * ratio(rng);
    many.push_back({s, d});
    sum += 1.0 - std::fabs(s - d) / s;
  }
  CHECK(std::fabs(corpus_speech_overlap(many) - sum / 100.0) < 1e-9);
}

TEST_CASE("segment alignment") {
  const std::vector<std::int64_t> src{1000, 800};
  CHECK(align_segments(src, std::vector<std::int64_t>{900, 700}).size() == 2);
  const auto missing = align_segments(src, std::vector<std::int64_t>{1700});
  REQUIRE(missing.size() == 2);
  CHECK(missing[0].dub_ms == 1700);
  CHECK(missing[1].dub_ms == 0);
  const auto surplus = align_segments(src, std::vector<std::int64_t>{900, 400, 300});
  REQUIRE(surplus.size() == 2);
  CHECK(surplus[1].dub_ms == 700);
}

TEST_CASE("BLEU of identical text is 100") {
  const std::vector<std::string> lines{"the cat sat on the mat", "let well alone", "a b c d e f"};
  CHECK(corpus_bleu(lines, lines) == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("BLEU hand value") {
  // Precisions 4/5, 3/4, 2/3, 1/2 and no brevity penalty.
  const std::vector<std::string> h{"a b c d e"}, r{"a b c d f"};
  CHECK(corpus_bleu(h, r) == doctest::Approx(100.0 * std::pow(0.2, 0.25)).epsilon(1e-12));
}

TEST_CASE("BLEU matches the brute-force oracle on small cases") {
  struct Case {
    std::vector<std::string> hyp, ref;
  };
  const std::vector<Case> cases{
      {{"the the the"}, {"the cat"}},
      {{"the cat sat on the mat"}, {"the cat is on the mat"}},
      {{"The Cat sat"}, {"the cat sat"}},
      {{""}, {"the cat sat"}},
      {{"", "let well alone today"}, {"a reference", "let well alone today"}},
      {{"a a a a a b"}, {"a a b b a a"}},
      {{"one two three four five six seven"}, {"one two three"}},
      {{"x y"}, {"x y z w v"}},
      {{"the dog sees a cat today", "a car and a house"}, {"the dog sees the cat on this day", "a car and the house"}},
      {{"let well alone", "k ae1 t s", "on this day a man"}, {"let well alone", "cats", "today a man"}},
      {{"w1 w2 w3 w4 w1 w2 w3 w4"}, {"w1 w2 w3 w4"}},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const double expect = oracle_bleu(cases[i].hyp, cases[i].ref);
    CHECK_MESSAGE(std::fabs(corpus_bleu(cases[i].hyp, cases[i].ref) - expect) < 1e-6, "case " << i);
  }
}

TEST_CASE("BLEU smoothing and edge cases") {
  // Zero matches at orders 2 and 3 use 100 / (2^k * total).
  const std::vector<std::string> h{"a b x c"}, r{"a b c d"};
  // counts: 1-gram 3/4, 2-gram 1/3 (a b), 3-gram 0/2, 4-gram 0/1.
  const double expect = 100.0 * std::exp((std::log(0.75) + std::log(1.0 / 3.0) + std::log(1.0 / (2 * 2)) +
                                          std::log(1.0 / (4 * 1))) / 4.0);
  CHECK(corpus_bleu(h, r) == doctest::Approx(expect).epsilon(1e-12));
  // No 4-grams anywhere: the score is zero.
  const std::vector<std::string> shorth{"a b c"};
  CHECK(corpus_bleu(shorth, shorth) == 0.0);
  // Empty system output.
  const std::vector<std::string> empty{""}, ref{"a b c d"};
  CHECK(corpus_bleu(empty, ref) == 0.0);
  CHECK_THROWS_AS(corpus_bleu(std::vector<std::string>{"a"}, std::vector<std::string>{"a", "b"}),
                  std::invalid_argument);
}

TEST_CASE("BLEU statistics accumulate across sentences") {
  const auto a = sentence_stats("the cat sat", "the cat sat down");
  CHECK(a.sys_len == 3);
  CHECK(a.ref_len == 4);
  CHECK(a.correct[0] == 3);
  CHECK(a.total[2] == 1);
  auto sum = a;
  sum += sentence_stats("Let well alone now", "let well alone now");
  CHECK(sum.sys_len == 7);
  CHECK(sum.correct[3] == 1);
  const std::vector<std::string> h{"the cat sat", "Let well alone now"}, r{"the cat sat down", "let well alone now"};
  CHECK(bleu_from_stats(sum) == doctest::Approx(corpus_bleu(h, r)));
}

TEST_CASE("isometry counts code points") {
  CHECK(isometry_ratio("abcd", "ab") == 0.5);
  CHECK(isometry_ratio("über", "ober") == 1.0);
  CHECK(isometry_ratio("straße", "strasse") == doctest::Approx(7.0 / 6.0));
  CHECK_THROWS_AS(isometry_ratio("", "x"), std::invalid_argument);
}

TEST_CASE("evaluation report") {
  std::vector<EvalSample> samples(2);
  samples[0] = {"a", "let well alone", "let well alone", "lass es gut sein", {1000}, std::vector<std::int64_t>{800}};
  samples[1] = {"b", "the cat and the dog", "the cat and a dog", "die katze und der hund", {1000, 2000},
                std::vector<std::int64_t>{1000, 1000}};
  const auto rep = evaluate("d", samples);
  CHECK(rep.segments == 3);
  REQUIRE(rep.so.has_value());
  CHECK(*rep.so == doctest::Approx((0.8 + 1.0 + 0.5) / 3.0));
  REQUIRE(rep.rows.size() == 2);
  CHECK(*rep.rows[1].so == doctest::Approx(0.75));
  CHECK(*rep.rows[1].utterance_so == doctest::Approx(2.0 / 3.0));
  CHECK(rep.rows[1].src_ms == 3000);
  CHECK(*rep.rows[1].dub_ms == 2000);
  const std::vector<std::string> h{samples[0].hypothesis, samples[1].hypothesis},
      r{samples[0].reference, samples[1].reference};
  CHECK(rep.bleu == doctest::Approx(corpus_bleu(h, r)));
  CHECK(rep.isometry.has_value());

  std::vector<EvalSample> text_only{{"t", "hello there", "hello there", "", {500}, std::nullopt}};
  const auto trep = evaluate("mt", text_only);
  CHECK_FALSE(trep.so.has_value());
  CHECK_FALSE(trep.isometry.has_value());
  const std::vector<EvalReport> both{rep, trep};
  const auto table = format_table(both);
  CHECK(table.find("System") != std::string::npos);
  CHECK(table.find("mt") != std::string::npos);
  CHECK(table.find(" -") != std::string::npos);
  const auto j = rep.to_json();
  CHECK(j.at("rows").size() == 2);
  CHECK(j.at("so").get<double>() == doctest::Approx(*rep.so));
}

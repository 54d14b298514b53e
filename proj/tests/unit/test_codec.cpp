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


#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "fixtures.h"
#include "isodub/binning/binning.h"
#include "isodub/codec/bpe.h"
#include "isodub/codec/sequence.h"
#include "isodub/codec/vocab.h"
#include "isodub/common/error.h"

using namespace isodub;
using namespace isodub::codec;

namespace {

// "let well alone" with the frame counts of the reference listing.
corpus::TrainingRecord let_well_alone() {
  corpus::TrainingRecord r;
  r.id = "lwa";
  r.source_text = "Lass es gut sein";
  r.target_words = {"let", "well", "alone"};
  r.target_phones = {{"L", 10, 0},  {"EH1", 6, 0}, {"T", 15, 0}, {"W", 4, 1},  {"EH1", 6, 1},
                     {"L", 7, 1},   {"AH0", 7, 2}, {"L", 6, 2},  {"OW1", 8, 2}, {"N", 7, 2}};
  r.segment_durations_ms = {760};
  return r;
}

corpus::TrainingRecord random_record(std::mt19937_64& rng, int id) {
  const auto& inv = arpabet_inventory();
  std::uniform_int_distribution<int> nwords(1, 8), nphones(1, 5), frames(1, kDefaultMaxDuration);
  std::uniform_int_distribution<std::size_t> pick(0, inv.size() - 1);
  corpus::TrainingRecord r;
  r.id = "r" + std::to_string(id);
  const int n = nwords(rng);
  for (int w = 0; w < n; ++w) {
    r.target_words.push_back("w" + std::to_string(w));
    if (w > 0 && rng() % 4 == 0) r.segment_breaks.push_back(r.target_phones.size());
    const int p = nphones(rng);
    for (int i = 0; i < p; ++i) r.target_phones.push_back({inv[pick(rng)], frames(rng), w});
  }
  r.segment_durations_ms.assign(r.segment_breaks.size() + 1, 0);
  return r;
}

}  // namespace

TEST_CASE("vocabulary specials and file format") {
  const auto v = make_phoneme_vocab();
  const std::vector<std::string> specials{"<pad>", "<s>", "</s>", "<unk>", "DELIM", "EOW", "PAUSE"};
  REQUIRE(Vocabulary::special_tokens().size() == specials.size());
  CHECK(v.token(Vocabulary::kDelim) == "DELIM");
  CHECK(v.token(Vocabulary::kEow) == "EOW");
  CHECK(v.token(Vocabulary::kPause) == "PAUSE");
  CHECK(v.find("AH0").has_value());
  CHECK(v.find("128").has_value());
  CHECK_FALSE(v.find("129").has_value());
  CHECK(v.id_or_unk("XX") == Vocabulary::kUnk);
  for (int i = 0; i < v.size(); ++i) CHECK(v.find(v.token(i)) == i);

  const auto text = v.serialize();
  const auto back = Vocabulary::parse(text, VocabKind::kPhonemeClosed);
  CHECK(back.size() == v.size());
  CHECK(back.fingerprint() == v.fingerprint());
  CHECK_THROWS_AS(Vocabulary::parse("<pad>\n<s>\n", VocabKind::kTextBpe), DataError);
  CHECK_THROWS_AS(Vocabulary::parse(text + "AH0\n", VocabKind::kPhonemeClosed), DataError);
}

TEST_CASE("special token spellings") {
  const auto& s = Vocabulary::special_tokens();
  CHECK(s[Vocabulary::kPad] == "<pad>");
  CHECK(s[Vocabulary::kBos] == "<s>");
  CHECK(s[Vocabulary::kEos] == "</s>");
  CHECK(s[Vocabulary::kUnk] == "<unk>");
}

TEST_CASE("stress helpers") {
  CHECK(is_vowel("AH0"));
  CHECK(is_vowel("OW1"));
  CHECK_FALSE(is_vowel("L"));
  CHECK(strip_stress("EH1") == "EH");
  CHECK(strip_stress("T") == "T");
}

TEST_CASE("BPE merges the most frequent pair first") {
  // Symbols: "a a a b</w>" (x1), "a a b</w>" (x1).
  // Pair counts: (a,a) = 2 + 1 = 3, (a,b</w>) = 1 + 1 = 2.
  const std::vector<std::string> corpus{"aaab aab"};
  const auto m = BpeModel::train(corpus, 50);
  REQUIRE_FALSE(m.merges().empty());
  CHECK(m.merges()[0] == BpeModel::Merge{"a", "a"});
}

TEST_CASE("BPE on a single character learns nothing") {
  const std::vector<std::string> corpus{"a"};
  const auto m = BpeModel::train(corpus, 10);
  CHECK(m.merges().empty());
  CHECK(m.encode("a") == std::vector<std::string>{"a</w>"});
}

TEST_CASE("BPE stops when no pair repeats and rejects tiny vocab sizes") {
  const std::vector<std::string> corpus{"ab cd"};
  CHECK(BpeModel::train(corpus, 100).merges().empty());
  CHECK_THROWS_AS(BpeModel::train(corpus, 2), DataError);
  const std::vector<std::string> empty{"   "};
  CHECK_THROWS_AS(BpeModel::train(empty, 10), DataError);
}

TEST_CASE("BPE respects the vocabulary limit") {
  const std::vector<std::string> corpus{"lass es gut sein", "es ist gut", "lass das sein", "gut gut gut"};
  const auto full = BpeModel::train(corpus, 1000);
  // A freshly trained model lists its characters before any merged symbol.
  const std::size_t chars = full.symbols().size() - full.merges().size();
  for (std::size_t limit : {chars, chars + 3, chars + 8}) {
    const auto m = BpeModel::train(corpus, limit);
    CHECK(m.symbols().size() <= limit);
  }
  CHECK(full.symbols().size() > chars);
}

TEST_CASE("BPE round trip on its training corpus") {
  const std::vector<std::string> corpus{"Lass es gut sein", "Es ist nicht gut", "Sein oder nicht sein", "über straße"};
  const auto m = BpeModel::train(corpus, 40);
  for (const auto& line : corpus) CHECK(BpeModel::detokenize(m.encode(line)) == line);
  // Serialized merges reproduce the segmentation.
  const auto back = BpeModel::parse(m.serialize());
  CHECK(back.merges() == m.merges());
  for (const auto& line : corpus) CHECK(back.encode(line) == m.encode(line));
  CHECK_THROWS_AS(BpeModel::parse("a b c\n"), DataError);
}

TEST_CASE("source encoding appends DELIM and bins") {
  const std::vector<std::string> corpus{"Lass es gut sein"};
  const auto bpe = BpeModel::train(corpus, 30);
  auto vocab = bpe.make_vocab();
  for (int i = 0; i < 10; ++i) vocab.add(binning::bin_token(i, 10));

  const auto ids = encode_source("Lass es gut sein", std::vector<int>{4}, bpe, vocab);
  const auto text_ids = encode_text("Lass es gut sein", bpe, vocab);
  REQUIRE(ids.size() == text_ids.size() + 2);
  CHECK(std::equal(text_ids.begin(), text_ids.end() - 1, ids.begin()));
  CHECK(format_tokens(ids, vocab).ends_with(" DELIM BIN4"));
  CHECK(ids.back() == Vocabulary::kEos);

  const auto two = encode_source("gut", std::vector<int>{7, 2}, bpe, vocab);
  CHECK(format_tokens(two, vocab).ends_with("DELIM BIN7 BIN2"));
  CHECK_THROWS_AS(encode_source("gut", std::vector<int>{}, bpe, vocab), DataError);
  CHECK_THROWS_AS(encode_source("gut", std::vector<int>{12}, bpe, vocab), DataError);
  // Unseen characters become UNK rather than failing.
  const auto unk = encode_text("xyz", bpe, vocab);
  CHECK(std::count(unk.begin(), unk.end(), Vocabulary::kUnk) > 0);
}

TEST_CASE("target listing for let well alone") {
  const auto v = make_phoneme_vocab();
  const auto ids = encode_target(let_well_alone(), v);
  CHECK(format_tokens(ids, v) == "L 10 EH1 6 T 15 EOW W 4 EH1 6 L 7 EOW AH0 7 L 6 OW1 8 N 7 EOW");
  CHECK(ids.back() == Vocabulary::kEos);

  const auto parsed = parse_tokens("L 10 EH1 6 T 15 EOW W 4 EH1 6 L 7 EOW AH0 7 L 6 OW1 8 N 7 EOW", v);
  const auto d = decode_target(parsed, v);
  CHECK(d.words.size() == 3);
  CHECK(d.phone_count() == 10);
  CHECK(d.segment_count() == 1);
  CHECK(d.repairs.total() == 0);
  CHECK(render_timing(d, 10) == std::vector<std::int64_t>{760});
  CHECK(d == target_structure(let_well_alone()));
}

TEST_CASE("single phone word and two segments") {
  const auto v = make_phoneme_vocab();
  corpus::TrainingRecord one;
  one.target_words = {"p"};
  one.target_phones = {{"P", 7, 0}};
  CHECK(format_tokens(encode_target(one, v), v) == "P 7 EOW");
  CHECK(render_timing(decode_target(encode_target(one, v), v), 10) == std::vector<std::int64_t>{70});

  corpus::TrainingRecord two;
  two.target_words = {"a", "b"};
  two.target_phones = {{"AH0", 30, 0}, {"B", 12, 1}};
  two.segment_breaks = {1};
  const auto ids = encode_target(two, v);
  CHECK(std::count(ids.begin(), ids.end(), Vocabulary::kPause) == 1);
  CHECK(format_tokens(ids, v) == "AH0 30 EOW PAUSE B 12 EOW");
  const auto d = decode_target(ids, v);
  CHECK(render_timing(d, 10) == std::vector<std::int64_t>{300, 120});
  // Linear in frame_ms.
  CHECK(render_timing(d, 20) == std::vector<std::int64_t>{600, 240});
}

TEST_CASE("unknown phoneme and duration clipping") {
  const auto v = make_phoneme_vocab();
  corpus::TrainingRecord bad;
  bad.id = "bad";
  bad.target_words = {"x"};
  bad.target_phones = {{"QQ", 3, 0}};
  CHECK_THROWS_AS(encode_target(bad, v), DataError);
  bad.target_phones = {{"PAUSE", 3, 0}};
  CHECK_THROWS_AS(encode_target(bad, v), DataError);

  corpus::TrainingRecord longp;
  longp.target_words = {"a"};
  longp.target_phones = {{"AA1", 300, 0}};
  int clipped = 0;
  const auto ids = encode_target(longp, v, kDefaultMaxDuration, &clipped);
  CHECK(clipped == 1);
  CHECK(format_tokens(ids, v) == "AA1 128 EOW");
}

TEST_CASE("decoder repairs malformed output") {
  const auto v = make_phoneme_vocab();
  SUBCASE("missing duration") {
    const auto d = decode_target(parse_tokens("L EOW", v), v);
    REQUIRE(d.words.size() == 1);
    CHECK(d.words[0].phones[0] == DecodedPhone{"L", 1});
    CHECK(d.repairs.missing_duration == 1);
    CHECK(d.repairs.total() == 1);
  }
  SUBCASE("dangling duration is dropped") {
    const auto d = decode_target(parse_tokens("L 5 7 EOW", v), v);
    CHECK(d.words[0].phones == std::vector<DecodedPhone>{{"L", 5}});
    CHECK(d.repairs.dangling_duration == 1);
  }
  SUBCASE("missing EOW before PAUSE and at the end") {
    const auto d = decode_target(parse_tokens("L 5 PAUSE T 3", v), v);
    CHECK(d.words.size() == 2);
    CHECK(d.segment_count() == 2);
    CHECK(d.repairs.missing_eow == 2);
  }
  SUBCASE("stray pauses and specials") {
    const auto d = decode_target(parse_tokens("PAUSE L 5 EOW PAUSE PAUSE DELIM T 3 EOW PAUSE", v), v);
    CHECK(d.words.size() == 2);
    CHECK(d.segment_count() == 2);
    CHECK(d.repairs.stray_pause == 3);
    CHECK(d.repairs.stray_token == 1);
  }
  SUBCASE("empty and out-of-range input") {
    const std::vector<int> ids{-4, 100000, Vocabulary::kEos};
    const auto d = decode_target(ids, v);
    CHECK(d.words.empty());
    CHECK(d.segment_count() == 0);
    CHECK(render_timing(d, 10).empty());
    CHECK(d.repairs.stray_token == 2);
  }
  SUBCASE("tokens after EOS are ignored") {
    auto ids = parse_tokens("L 5 EOW", v);
    ids.push_back(Vocabulary::kEos);
    for (const int x : parse_tokens("T 3 EOW", v)) ids.push_back(x);
    CHECK(decode_target(ids, v).words.size() == 1);
  }
}

TEST_CASE("target roundtrip on 1000 random records") {
  const auto v = make_phoneme_vocab();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto rec = random_record(rng, i);
    const auto ids = encode_target(rec, v);
    const auto d = decode_target(ids, v);
    REQUIRE(d == target_structure(rec));
    CHECK(d.repairs.total() == 0);
    CHECK(d.segment_count() == rec.segment_breaks.size() + 1);
    // Timing is additive over segments.
    std::int64_t frames = 0;
    for (const auto& p : rec.target_phones) frames += p.frames;
    const auto t = render_timing(d, 10);
    CHECK(std::accumulate(t.begin(), t.end(), std::int64_t{0}) == frames * 10);
  }
}

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

#include "isodub/cli/toy_corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "isodub/codec/vocab.h"
#include "isodub/common/io.h"
#include "isodub/common/rng.h"

namespace isodub::cli {

namespace {

struct Entry {
  const char* word;
  const char* phones;
  const char* source;
};

// clang-format off
constexpr Entry kDeterminers[] = {{"the", "DH AH0", "der"}, {"a", "AH0", "ein"}};
constexpr Entry kNouns[] = {
    {"cat", "K AE1 T", "katze"},           {"cats", "K AE1 T S", "katzen"},
    {"dog", "D AO1 G", "hund"},            {"dogs", "D AO1 G Z", "hunde"},
    {"man", "M AE1 N", "mann"},            {"men", "M EH1 N", "maenner"},
    {"child", "CH AY1 L D", "kind"},       {"children", "CH IH1 L D R AH0 N", "kinder"},
    {"friend", "F R EH1 N D", "freund"},   {"friends", "F R EH1 N D Z", "freunde"},
    {"bird", "B ER1 D", "vogel"},          {"birds", "B ER1 D Z", "voegel"},
    {"house", "HH AW1 S", "haus"},         {"car", "K AA1 R", "auto"},
    {"book", "B UH1 K", "buch"},           {"garden", "G AA1 R D AH0 N", "garten"}};
constexpr Entry kPossessives[] = {{"cat's", "K AE1 T S", "katzes"}, {"dog's", "D AO1 G Z", "hundes"}};
constexpr Entry kVerbs[] = {
    {"sees", "S IY1 Z", "sieht"},   {"likes", "L AY1 K S", "mag"},   {"wants", "W AA1 N T S", "will"},
    {"has", "HH AE1 Z", "hat"},     {"finds", "F AY1 N D Z", "findet"}, {"sells", "S EH1 L Z", "verkauft"}};
constexpr Entry kAdjectives[] = {
    {"big", "B IH1 G", "gross"}, {"small", "S M AO1 L", "klein"}, {"old", "OW1 L D", "alt"},
    {"new", "N UW1", "neu"},     {"red", "R EH1 D", "rot"},       {"happy", "HH AE1 P IY0", "froh"}};
// clang-format on

const char* const kFricatives[] = {"S", "Z", "F", "V", "SH", "ZH", "TH", "DH", "HH", "CH", "JH"};

struct Word {
  std::string text;
  std::vector<std::string> phones;
};

struct Sentence {
  std::vector<std::string> source;
  std::vector<Word> target;
  std::vector<std::size_t> pause_before;  // target word indices
};

Word word(const Entry& e) { return {e.word, split_whitespace(e.phones)}; }

template <std::size_t N>
const Entry& pick(const Entry (&table)[N], std::mt19937_64& rng) {
  return table[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

bool coin(std::mt19937_64& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

void noun_phrase(Sentence& s, std::mt19937_64& rng) {
  if (coin(rng, 0.12)) {
    const Entry& owner = pick(kPossessives, rng);
    const Entry& noun = pick(kNouns, rng);
    s.source.insert(s.source.end(), {"der", owner.source, noun.source});
    s.target.insert(s.target.end(), {word(kDeterminers[0]), word(owner), word(noun)});
    return;
  }
  const Entry& det = pick(kDeterminers, rng);
  const Entry& noun = pick(kNouns, rng);
  s.source.push_back(det.source);
  s.target.push_back(word(det));
  if (coin(rng, 0.4)) {
    const Entry& adj = pick(kAdjectives, rng);
    s.source.insert(s.source.end(), {noun.source, adj.source});
    s.target.insert(s.target.end(), {word(adj), word(noun)});
  } else {
    s.source.push_back(noun.source);
    s.target.push_back(word(noun));
  }
}

void clause(Sentence& s, const ToyCorpusSpec& spec, std::mt19937_64& rng) {
  const bool adverb = coin(rng, spec.adverb_prob);
  if (adverb) s.source.push_back("heute");
  noun_phrase(s, rng);
  const Entry& verb = pick(kVerbs, rng);
  s.source.push_back(verb.source);
  s.target.push_back(word(verb));
  noun_phrase(s, rng);
  if (!adverb) return;
  if (coin(rng, spec.long_variant)) {
    s.target.push_back({"on", {"AA1", "N"}});
    s.target.push_back({"this", {"DH", "IH1", "S"}});
    s.target.push_back({"day", {"D", "EY1"}});
  } else {
    s.target.push_back({"today", {"T", "AH0", "D", "EY1"}});
  }
}

Sentence sentence(const ToyCorpusSpec& spec, std::mt19937_64& rng) {
  Sentence s;
  if (coin(rng, 0.03)) {
    s.source = {"lass", "es", "gut", "sein"};
    s.target = {{"let", {"L", "EH1", "T"}}, {"well", {"W", "EH1", "L"}}, {"alone", {"AH0", "L", "OW1", "N"}}};
    return s;
  }
  clause(s, spec, rng);
  if (coin(rng, spec.and_prob)) {
    if (coin(rng, spec.pause_prob)) s.pause_before.push_back(s.target.size());
    s.source.push_back("und");
    s.target.push_back({"and", {coin(rng, 0.5) ? "AE1" : "AH0", "N", "D"}});
    clause(s, spec, rng);
  }
  return s;
}

double base_ms(const std::string& phone) {
  if (codec::is_vowel(phone)) return phone.back() == '0' ? 60.0 : 110.0;
  for (const char* f : kFricatives)
    if (phone == f) return 85.0;
  return 65.0;
}

ToyItem make_item(const std::string& id, const ToyCorpusSpec& spec, std::mt19937_64& rng) {
  const Sentence s = sentence(spec, rng);
  ToyItem item;
  auto& utt = item.utterance;
  utt.id = id;
  utt.source_text = join(s.source, " ");
  const double rate = std::exp(
      std::uniform_real_distribution<double>(std::log(spec.rate_min), std::log(spec.rate_max))(rng));
  std::normal_distribution<double> jitter(0.0, spec.phone_jitter);
  std::int64_t t = std::uniform_int_distribution<std::int64_t>(100, 300)(rng);
  for (std::size_t w = 0; w < s.target.size(); ++w) {
    utt.target_words.push_back(s.target[w].text);
    if (w > 0) {
      if (std::find(s.pause_before.begin(), s.pause_before.end(), w) != s.pause_before.end())
        t += std::uniform_int_distribution<std::int64_t>(350, 700)(rng);
      else if (coin(rng, 0.5))
        t += std::uniform_int_distribution<std::int64_t>(5, 40)(rng);
    }
    for (const auto& ph : s.target[w].phones) {
      const auto d = std::max<std::int64_t>(20, std::llround(base_ms(ph) * rate * std::exp(jitter(rng))));
      utt.phones.push_back({ph, t, t + d, static_cast<int>(w)});
      t += d;
    }
  }
  std::normal_distribution<double> src_noise(0.0, spec.source_noise);
  for (const auto& seg : corpus::segment_utterance(utt, corpus::kDefaultPauseMs))
    item.source_segments_ms.push_back(
        std::llround(static_cast<double>(seg.duration_ms) * std::exp(spec.source_bias + src_noise(rng))));
  return item;
}

std::vector<ToyItem> make_split(const char* name, int count, std::uint64_t split, const ToyCorpusSpec& spec) {
  std::vector<ToyItem> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    char id[64];
    std::snprintf(id, sizeof id, "%s-%05d", name, i);
    auto rng = substream(spec.seed, "toy", {split, static_cast<std::uint64_t>(i)});
    out.push_back(make_item(id, spec, rng));
  }
  return out;
}

std::string alignments_jsonl(const std::vector<ToyItem>& items) {
  std::string out;
  for (const auto& it : items) out += corpus::to_json(it.utterance).dump() + "\n";
  return out;
}

}  // namespace

nlohmann::json ToyCorpusSpec::to_json() const {
  return {{"train", train},           {"dev", dev},
          {"test", test},             {"seed", seed},
          {"rate_min", rate_min},     {"rate_max", rate_max},
          {"phone_jitter", phone_jitter}, {"pause_prob", pause_prob},
          {"and_prob", and_prob},     {"long_variant", long_variant},
          {"adverb_prob", adverb_prob}, {"source_bias", source_bias},
          {"source_noise", source_noise}};
}

const p2w::PronLexicon& toy_lexicon() {
  static const p2w::PronLexicon lex = [] {
    p2w::PronLexicon l;
    auto add_all = [&](const auto& table) {
      for (const Entry& e : table) l.add(e.word, split_whitespace(e.phones));
    };
    add_all(kDeterminers);
    add_all(kNouns);
    add_all(kPossessives);
    add_all(kVerbs);
    add_all(kAdjectives);
    l.add("today", {"T", "AH0", "D", "EY1"});
    l.add("on", {"AA1", "N"});
    l.add("this", {"DH", "IH1", "S"});
    l.add("day", {"D", "EY1"});
    l.add("and", {"AE1", "N", "D"});
    l.add("and", {"AH0", "N", "D"});
    l.add("let", {"L", "EH1", "T"});
    l.add("well", {"W", "EH1", "L"});
    l.add("alone", {"AH0", "L", "OW1", "N"});
    return l;
  }();
  return lex;
}

ToyCorpus generate_toy_corpus(const ToyCorpusSpec& spec) {
  ToyCorpus c;
  c.train = make_split("train", spec.train, 0, spec);
  c.dev = make_split("dev", spec.dev, 1, spec);
  c.test = make_split("test", spec.test, 2, spec);
  return c;
}

void write_toy_corpus(const ToyCorpus& corpus, const std::filesystem::path& dir) {
  write_file(dir / "train.align.jsonl", alignments_jsonl(corpus.train));
  write_file(dir / "dev.align.jsonl", alignments_jsonl(corpus.dev));
  write_file(dir / "test.align.jsonl", alignments_jsonl(corpus.test));
  std::string inputs;
  for (const auto& it : corpus.test)
    inputs += nlohmann::json{{"id", it.utterance.id}, {"text", it.utterance.source_text},
                             {"seg_ms", it.source_segments_ms}}
                  .dump() +
              "\n";
  write_file(dir / "test_input.jsonl", inputs);
  toy_lexicon().save(dir / "lexicon.txt");
}

}  // namespace isodub::cli

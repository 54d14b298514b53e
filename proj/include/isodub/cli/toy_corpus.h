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

#ifndef ISODUB_CLI_TOY_CORPUS_H_
#define ISODUB_CLI_TOY_CORPUS_H_

// Synthetic dubbing corpus: a small English-like target language with a
// pronunciation lexicon, a word-mapped source language, per-utterance
// speaking rates and clause-boundary pauses. Test items also carry
// "source speech" segment durations, which run longer than the target
// speech and are what a dub has to match.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "isodub/corpus/corpus.h"
#include "isodub/p2w/lexicon.h"
#include "json.hpp"

namespace isodub::cli {

struct ToyCorpusSpec {
  int train = 2000;
  int dev = 150;
  int test = 200;
  std::uint64_t seed = 1;
  double rate_min = 0.7;  // speaking-rate multiplier, log-uniform
  double rate_max = 1.45;
  double phone_jitter = 0.12;   // log-normal sd per phone
  double pause_prob = 0.35;     // pause before a clause-joining "and"
  double and_prob = 0.45;
  double long_variant = 0.35;   // "heute" -> "on this day" instead of "today"
  double adverb_prob = 0.5;
  double source_bias = 0.18;    // log ratio of source over target speech
  double source_noise = 0.08;   // log-normal sd per segment

  nlohmann::json to_json() const;
};

struct ToyItem {
  corpus::AlignedUtterance utterance;
  std::vector<std::int64_t> source_segments_ms;  // simulated source speech
};

struct ToyCorpus {
  std::vector<ToyItem> train, dev, test;
};

// The toy target lexicon, including "cats"/"cat's" sharing K AE1 T S and
// both pronunciations of "and".
const p2w::PronLexicon& toy_lexicon();

ToyCorpus generate_toy_corpus(const ToyCorpusSpec& spec);

// Writes train/dev/test alignment JSONL, test_input.jsonl ({id, text,
// seg_ms}) and lexicon.txt into dir.
void write_toy_corpus(const ToyCorpus& corpus, const std::filesystem::path& dir);

}  // namespace isodub::cli

#endif  // ISODUB_CLI_TOY_CORPUS_H_

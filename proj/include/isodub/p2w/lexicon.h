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

#ifndef ISODUB_P2W_LEXICON_H_
#define ISODUB_P2W_LEXICON_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isodub/codec/sequence.h"
#include "isodub/corpus/corpus.h"

namespace isodub::p2w {

using Pronunciation = std::vector<std::string>;

// word -> pronunciations. Words are stored lowercase.
class PronLexicon {
 public:
  // Throws DataError on an empty pronunciation.
  void add(std::string_view word, Pronunciation phones);
  const std::vector<Pronunciation>* find(std::string_view word) const;
  const std::map<std::string, std::vector<Pronunciation>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // "WORD  PH PH PH" per line; repeated words add alternate pronunciations.
  static PronLexicon parse(std::string_view text);
  static PronLexicon load(const std::filesystem::path& path);
  std::string serialize() const;
  void save(const std::filesystem::path& path) const;

  bool operator==(const PronLexicon&) const = default;

 private:
  std::map<std::string, std::vector<Pronunciation>> entries_;
};

// Unigram counts over training target words.
using WordCounts = std::map<std::string, std::int64_t>;

WordCounts count_words(std::span<const corpus::TrainingRecord> records);
// "word count" per line.
WordCounts parse_counts(std::string_view text);
std::string serialize_counts(const WordCounts& counts);

// Pronunciation (phones joined by single spaces) -> candidate words.
using InverseLexicon = std::map<std::string, std::set<std::string>>;

InverseLexicon invert_lexicon(const PronLexicon& lexicon);
// The inverse of an inverse, read back as word -> pronunciations.
PronLexicon invert_back(const InverseLexicon& inverse);

std::string pronunciation_key(std::span<const std::string> phones);

enum class MatchKind { kExact, kNearest, kOov };

struct WordMatch {
  std::string word;
  MatchKind kind = MatchKind::kExact;
  int distance = 0;
};

class PhonesToWords {
 public:
  PhonesToWords(const PronLexicon& lexicon, WordCounts counts, int max_distance = 1);

  // Exact match picks the most frequent candidate (ties: lexicographic).
  // Otherwise the nearest stress-stripped pronunciation within
  // max_distance edits, else the OOV marker "ph_ph_ph".
  WordMatch lookup(std::span<const std::string> phones) const;
  std::vector<std::string> words(const codec::DecodedTarget& target) const;
  std::string text(const codec::DecodedTarget& target) const;

 private:
  std::string best_of(const std::set<std::string>& candidates) const;

  InverseLexicon exact_;
  std::vector<std::pair<Pronunciation, std::set<std::string>>> stripped_;
  WordCounts counts_;
  int max_distance_;
};

std::string oov_marker(std::span<const std::string> phones);
int edit_distance(std::span<const std::string> a, std::span<const std::string> b);

struct RecoveryReport {
  std::size_t unambiguous_total = 0;
  std::size_t unambiguous_recovered = 0;
  std::size_t total = 0;  // every (word, pronunciation) pair
  std::size_t recovered = 0;
  double unambiguous_rate() const;
  double rate() const;
};

// words -> lexicon pronunciations -> PhonesToWords, over the vocabulary in
// `counts` (or the whole lexicon if counts is empty).
RecoveryReport measure_recovery(const PronLexicon& lexicon, const WordCounts& counts);

}  // namespace isodub::p2w

#endif  // ISODUB_P2W_LEXICON_H_

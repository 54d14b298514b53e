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

#include "isodub/p2w/lexicon.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

#include "isodub/codec/vocab.h"
#include "isodub/common/error.h"
#include "isodub/common/io.h"

namespace isodub::p2w {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Pronunciation stripped(std::span<const std::string> phones) {
  Pronunciation out;
  out.reserve(phones.size());
  for (const auto& p : phones) out.push_back(codec::strip_stress(p));
  return out;
}

}  // namespace

void PronLexicon::add(std::string_view word, Pronunciation phones) {
  if (word.empty()) throw DataError("lexicon entry without a word");
  if (phones.empty()) throw DataError("lexicon entry '" + std::string(word) + "' has no phonemes");
  auto& prons = entries_[lower(word)];
  if (std::find(prons.begin(), prons.end(), phones) == prons.end()) prons.push_back(std::move(phones));
}

const std::vector<Pronunciation>* PronLexicon::find(std::string_view word) const {
  const auto it = entries_.find(lower(word));
  return it == entries_.end() ? nullptr : &it->second;
}

PronLexicon PronLexicon::parse(std::string_view text) {
  PronLexicon lex;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.starts_with(";;;") || t.starts_with('#')) continue;
    auto fields = split_whitespace(t);
    if (fields.size() < 2)
      throw DataError("lexicon line " + std::to_string(line_no) + ": expected WORD followed by phonemes");
    const std::string word = fields.front();
    fields.erase(fields.begin());
    lex.add(word, std::move(fields));
  }
  return lex;
}

PronLexicon PronLexicon::load(const std::filesystem::path& path) { return parse(read_file(path)); }

std::string PronLexicon::serialize() const {
  std::string out;
  for (const auto& [word, prons] : entries_) {
    for (const auto& p : prons) {
      std::string upper = word;
      for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      out += upper + "  " + join(p, " ") + "\n";
    }
  }
  return out;
}

void PronLexicon::save(const std::filesystem::path& path) const { write_file(path, serialize()); }

WordCounts count_words(std::span<const corpus::TrainingRecord> records) {
  WordCounts counts;
  for (const auto& r : records)
    for (const auto& w : r.target_words) ++counts[lower(w)];
  return counts;
}

WordCounts parse_counts(std::string_view text) {
  WordCounts counts;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    const auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    std::int64_t n = 0;
    const auto& f = fields.size() == 2 ? fields[1] : std::string();
    const auto res = std::from_chars(f.data(), f.data() + f.size(), n);
    if (fields.size() != 2 || res.ec != std::errc() || res.ptr != f.data() + f.size() || n < 0)
      throw DataError("counts line " + std::to_string(line_no) + ": expected 'word count'");
    counts[lower(fields[0])] += n;
  }
  return counts;
}

std::string serialize_counts(const WordCounts& counts) {
  std::string out;
  for (const auto& [w, n] : counts) out += w + " " + std::to_string(n) + "\n";
  return out;
}

std::string pronunciation_key(std::span<const std::string> phones) {
  std::string key;
  for (const auto& p : phones) {
    if (!key.empty()) key += ' ';
    key += p;
  }
  return key;
}

InverseLexicon invert_lexicon(const PronLexicon& lexicon) {
  InverseLexicon inv;
  for (const auto& [word, prons] : lexicon.entries())
    for (const auto& p : prons) inv[pronunciation_key(p)].insert(word);
  return inv;
}

PronLexicon invert_back(const InverseLexicon& inverse) {
  PronLexicon lex;
  for (const auto& [key, words] : inverse)
    for (const auto& w : words) lex.add(w, split_whitespace(key));
  return lex;
}

std::string oov_marker(std::span<const std::string> phones) {
  std::string out;
  for (const auto& p : phones) {
    if (!out.empty()) out += '_';
    out += lower(p);
  }
  return out;
}

int edit_distance(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

PhonesToWords::PhonesToWords(const PronLexicon& lexicon, WordCounts counts, int max_distance)
    : exact_(invert_lexicon(lexicon)), counts_(std::move(counts)), max_distance_(max_distance) {
  std::map<Pronunciation, std::set<std::string>> by_stripped;
  for (const auto& [key, words] : exact_) {
    const auto phones = split_whitespace(key);
    by_stripped[stripped(phones)].insert(words.begin(), words.end());
  }
  stripped_.assign(by_stripped.begin(), by_stripped.end());
}

std::string PhonesToWords::best_of(const std::set<std::string>& candidates) const {
  // std::set iterates lexicographically, so the first maximum wins ties.
  std::string best;
  std::int64_t best_count = -1;
  for (const auto& w : candidates) {
    const auto it = counts_.find(w);
    const std::int64_t n = it == counts_.end() ? 0 : it->second;
    if (n > best_count) {
      best = w;
      best_count = n;
    }
  }
  return best;
}

WordMatch PhonesToWords::lookup(std::span<const std::string> phones) const {
  if (const auto it = exact_.find(pronunciation_key(phones)); it != exact_.end())
    return {best_of(it->second), MatchKind::kExact, 0};

  const Pronunciation query = stripped(phones);
  int best_distance = std::numeric_limits<int>::max();
  std::set<std::string> pool;
  for (const auto& [pron, words] : stripped_) {
    const int d = edit_distance(query, pron);
    if (d > max_distance_) continue;
    if (d < best_distance) {
      best_distance = d;
      pool.clear();
    }
    if (d == best_distance) pool.insert(words.begin(), words.end());
  }
  if (!pool.empty()) return {best_of(pool), MatchKind::kNearest, best_distance};
  return {oov_marker(phones), MatchKind::kOov, -1};
}

std::vector<std::string> PhonesToWords::words(const codec::DecodedTarget& target) const {
  std::vector<std::string> out;
  out.reserve(target.words.size());
  std::vector<std::string> phones;
  for (const auto& w : target.words) {
    phones.clear();
    for (const auto& p : w.phones) phones.push_back(p.phone);
    if (phones.empty()) continue;
    out.push_back(lookup(phones).word);
  }
  return out;
}

std::string PhonesToWords::text(const codec::DecodedTarget& target) const { return join(words(target), " "); }

double RecoveryReport::unambiguous_rate() const {
  return unambiguous_total ? static_cast<double>(unambiguous_recovered) / static_cast<double>(unambiguous_total) : 0.0;
}

double RecoveryReport::rate() const {
  return total ? static_cast<double>(recovered) / static_cast<double>(total) : 0.0;
}

RecoveryReport measure_recovery(const PronLexicon& lexicon, const WordCounts& counts) {
  const InverseLexicon inverse = invert_lexicon(lexicon);
  const PhonesToWords p2w(lexicon, counts);
  RecoveryReport report;
  for (const auto& [word, prons] : lexicon.entries()) {
    if (!counts.empty() && !counts.contains(word)) continue;
    for (const auto& p : prons) {
      const bool recovered = p2w.lookup(p).word == word;
      ++report.total;
      report.recovered += recovered;
      if (inverse.at(pronunciation_key(p)).size() == 1) {
        ++report.unambiguous_total;
        report.unambiguous_recovered += recovered;
      }
    }
  }
  return report;
}

}  // namespace isodub::p2w

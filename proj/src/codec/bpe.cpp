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

#include "isodub/codec/bpe.h"

#include <algorithm>
#include <set>

#include "isodub/common/error.h"
#include "isodub/common/io.h"

namespace isodub::codec {

std::vector<std::string> split_characters(std::string_view word) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < word.size()) {
    std::size_t j = i + 1;
    while (j < word.size() && (static_cast<unsigned char>(word[j]) & 0xC0) == 0x80) ++j;
    out.emplace_back(word.substr(i, j - i));
    i = j;
  }
  if (!out.empty()) out.back() += BpeModel::kEndOfWord;
  return out;
}

BpeModel::BpeModel(std::vector<Merge> merges) : merges_(std::move(merges)) {
  for (std::size_t r = 0; r < merges_.size(); ++r) rank_.emplace(merges_[r], r);
}

BpeModel BpeModel::train(std::span<const std::string> corpus_lines, std::size_t vocab_size) {
  std::map<std::string, std::size_t> word_freq;
  for (const auto& line : corpus_lines)
    for (auto& w : split_whitespace(line)) ++word_freq[w];
  if (word_freq.empty()) throw DataError("train_bpe: empty corpus");

  std::vector<std::pair<std::vector<std::string>, std::size_t>> words;
  std::set<std::string> chars;
  for (const auto& [w, f] : word_freq) {
    auto sym = split_characters(w);
    chars.insert(sym.begin(), sym.end());
    words.emplace_back(std::move(sym), f);
  }
  if (vocab_size < chars.size())
    throw DataError("train_bpe: vocab_size " + std::to_string(vocab_size) + " below character inventory of " +
                    std::to_string(chars.size()));

  BpeModel model;
  model.symbols_.assign(chars.begin(), chars.end());
  std::set<std::string> inventory(chars);
  while (inventory.size() < vocab_size) {
    std::map<Merge, std::size_t> pair_freq;
    for (const auto& [sym, f] : words)
      for (std::size_t i = 0; i + 1 < sym.size(); ++i) pair_freq[{sym[i], sym[i + 1]}] += f;
    const Merge* best = nullptr;
    std::size_t best_f = 1;
    for (const auto& [p, f] : pair_freq)
      if (f > best_f) {  // map order gives the lexicographic tie-break
        best = &p;
        best_f = f;
      }
    if (!best) break;
    const Merge merge = *best;
    const std::string joined = merge.first + merge.second;
    for (auto& [sym, f] : words) {
      std::vector<std::string> next;
      next.reserve(sym.size());
      for (std::size_t i = 0; i < sym.size(); ++i) {
        if (i + 1 < sym.size() && sym[i] == merge.first && sym[i + 1] == merge.second) {
          next.push_back(joined);
          ++i;
        } else {
          next.push_back(sym[i]);
        }
      }
      sym = std::move(next);
    }
    model.rank_.emplace(merge, model.merges_.size());
    model.merges_.push_back(merge);
    if (inventory.insert(joined).second) model.symbols_.push_back(joined);
  }
  return model;
}

std::vector<std::string> BpeModel::encode_word(std::string_view word) const {
  auto sym = split_characters(word);
  while (sym.size() > 1) {
    std::size_t best_rank = merges_.size(), best_i = 0;
    for (std::size_t i = 0; i + 1 < sym.size(); ++i) {
      auto it = rank_.find({sym[i], sym[i + 1]});
      if (it != rank_.end() && it->second < best_rank) {
        best_rank = it->second;
        best_i = i;
      }
    }
    if (best_rank == merges_.size()) break;
    sym[best_i] += sym[best_i + 1];
    sym.erase(sym.begin() + static_cast<std::ptrdiff_t>(best_i) + 1);
  }
  return sym;
}

std::vector<std::string> BpeModel::encode(std::string_view text) const {
  std::vector<std::string> out;
  for (const auto& w : split_whitespace(text)) {
    auto pieces = encode_word(w);
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  return out;
}

std::string BpeModel::detokenize(std::span<const std::string> tokens) {
  std::string joined;
  for (const auto& t : tokens) joined += t;
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = joined.find(kEndOfWord, pos);
    if (hit == std::string::npos) {
      out += joined.substr(pos);
      break;
    }
    out += joined.substr(pos, hit - pos);
    out += ' ';
    pos = hit + kEndOfWord.size();
  }
  return trim(out);
}

std::string BpeModel::serialize() const {
  std::string out;
  for (const auto& [l, r] : merges_) out += l + " " + r + "\n";
  return out;
}

void BpeModel::save(const std::filesystem::path& path) const { write_file(path, serialize()); }

BpeModel BpeModel::parse(std::string_view text) {
  std::vector<Merge> merges;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto parts = split_whitespace(line);
    if (parts.size() != 2) throw DataError("bpe line " + std::to_string(line_no) + ": expected 'left right'");
    merges.emplace_back(parts[0], parts[1]);
  }
  BpeModel m(std::move(merges));
  std::set<std::string> seen;
  for (const auto& [l, r] : m.merges_)
    if (seen.insert(l + r).second) m.symbols_.push_back(l + r);
  return m;
}

BpeModel BpeModel::load(const std::filesystem::path& path) { return parse(read_file(path)); }

Vocabulary BpeModel::make_vocab() const {
  Vocabulary v(VocabKind::kTextBpe);
  for (const auto& s : symbols_) v.add(s);
  return v;
}

}  // namespace isodub::codec

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

#ifndef ISODUB_CODEC_BPE_H_
#define ISODUB_CODEC_BPE_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "isodub/codec/vocab.h"

namespace isodub::codec {

// Byte-pair encoding over whitespace-separated words. The last symbol of
// every word carries the "</w>" marker, so detokenization is a plain
// concatenation followed by marker-to-space replacement.
class BpeModel {
 public:
  static constexpr std::string_view kEndOfWord = "</w>";
  using Merge = std::pair<std::string, std::string>;

  BpeModel() = default;
  explicit BpeModel(std::vector<Merge> merges);

  // Greedy most-frequent-pair merging until the symbol inventory reaches
  // vocab_size or no pair occurs at least twice. Ties prefer the
  // lexicographically smallest pair. Throws DataError if vocab_size is
  // below the character inventory.
  static BpeModel train(std::span<const std::string> corpus_lines, std::size_t vocab_size);

  std::vector<std::string> encode_word(std::string_view word) const;
  std::vector<std::string> encode(std::string_view text) const;
  static std::string detokenize(std::span<const std::string> tokens);

  const std::vector<Merge>& merges() const { return merges_; }
  // Characters seen in training followed by merged symbols, in creation
  // order. A parsed model only knows its merged symbols.
  const std::vector<std::string>& symbols() const { return symbols_; }

  // One merge per line: "left right". The character inventory is not part
  // of this file; it lives in the vocabulary file.
  std::string serialize() const;
  void save(const std::filesystem::path& path) const;
  static BpeModel parse(std::string_view text);
  static BpeModel load(const std::filesystem::path& path);

  // Specials followed by every symbol.
  Vocabulary make_vocab() const;

 private:
  std::vector<Merge> merges_;
  std::vector<std::string> symbols_;
  std::map<Merge, std::size_t> rank_;
};

// UTF-8 aware split of a word into characters; the last gets "</w>".
std::vector<std::string> split_characters(std::string_view word);

}  // namespace isodub::codec

#endif  // ISODUB_CODEC_BPE_H_

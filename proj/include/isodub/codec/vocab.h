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

#ifndef ISODUB_CODEC_VOCAB_H_
#define ISODUB_CODEC_VOCAB_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace isodub::codec {

enum class VocabKind { kTextBpe, kPhonemeClosed };

// Token <-> id bijection. Ids 0..6 are the reserved specials, in this order.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kDelim = 4;
  static constexpr int kEow = 5;
  static constexpr int kPause = 6;
  static constexpr int kNumSpecials = 7;

  static const std::vector<std::string>& special_tokens();

  explicit Vocabulary(VocabKind kind = VocabKind::kTextBpe);

  // Adds the token if absent; returns its id either way.
  int add(std::string_view token);
  std::optional<int> find(std::string_view token) const;
  int id_or_unk(std::string_view token) const;
  const std::string& token(int id) const;
  bool is_special(int id) const { return id >= 0 && id < kNumSpecials; }

  int size() const { return static_cast<int>(tokens_.size()); }
  VocabKind kind() const { return kind_; }
  std::span<const std::string> tokens() const { return tokens_; }

  // One token per line, id = line number.
  std::string serialize() const;
  void save(const std::filesystem::path& path) const;
  static Vocabulary parse(std::string_view text, VocabKind kind);
  static Vocabulary load(const std::filesystem::path& path, VocabKind kind);
  std::string fingerprint() const;

 private:
  VocabKind kind_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

// ARPAbet inventory: 24 consonants plus 15 vowels, each vowel bare and with
// stress 0/1/2.
const std::vector<std::string>& arpabet_inventory();
bool is_vowel(std::string_view phone);
std::string strip_stress(std::string_view phone);

inline constexpr int kDefaultMaxDuration = 128;

// Specials, then the phoneme inventory, then duration tokens "1".."dmax".
Vocabulary make_phoneme_vocab(int dmax = kDefaultMaxDuration);

}  // namespace isodub::codec

#endif  // ISODUB_CODEC_VOCAB_H_

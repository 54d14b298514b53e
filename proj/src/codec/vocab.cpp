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

#include "isodub/codec/vocab.h"

#include <algorithm>
#include <stdexcept>

#include "isodub/common/error.h"
#include "isodub/common/hash.h"
#include "isodub/common/io.h"

namespace isodub::codec {

const std::vector<std::string>& Vocabulary::special_tokens() {
  static const std::vector<std::string> kSpecials = {"<pad>", "<s>", "</s>", "<unk>", "DELIM", "EOW", "PAUSE"};
  return kSpecials;
}

Vocabulary::Vocabulary(VocabKind kind) : kind_(kind) {
  for (const auto& s : special_tokens()) add(s);
}

int Vocabulary::add(std::string_view token) {
  std::string key(token);
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  const int id = size();
  tokens_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<int> Vocabulary::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

int Vocabulary::id_or_unk(std::string_view token) const { return find(token).value_or(kUnk); }

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("token id " + std::to_string(id));
  return tokens_[static_cast<std::size_t>(id)];
}

std::string Vocabulary::serialize() const {
  std::string out;
  for (const auto& t : tokens_) {
    out += t;
    out += '\n';
  }
  return out;
}

void Vocabulary::save(const std::filesystem::path& path) const { write_file(path, serialize()); }

Vocabulary Vocabulary::parse(std::string_view text, VocabKind kind) {
  Vocabulary v(kind);
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line_no < kNumSpecials) {
      if (line != special_tokens()[line_no])
        throw DataError("vocabulary line " + std::to_string(line_no + 1) + ": expected special '" +
                        special_tokens()[line_no] + "'");
    } else {
      if (line.empty() || v.find(line)) throw DataError("vocabulary line " + std::to_string(line_no + 1) + ": empty or duplicate token");
      v.add(line);
    }
    ++line_no;
  }
  if (line_no < kNumSpecials) throw DataError("vocabulary truncated");
  return v;
}

Vocabulary Vocabulary::load(const std::filesystem::path& path, VocabKind kind) {
  return parse(read_file(path), kind);
}

std::string Vocabulary::fingerprint() const { return hex64(fnv1a64(serialize())); }

namespace {
const char* const kConsonants[] = {"B", "CH", "D", "DH", "F", "G", "HH", "JH", "K", "L", "M", "N",
                                   "NG", "P", "R", "S", "SH", "T", "TH", "V", "W", "Y", "Z", "ZH"};
const char* const kVowels[] = {"AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER",
                               "EY", "IH", "IY", "OW", "OY", "UH", "UW"};
}  // namespace

const std::vector<std::string>& arpabet_inventory() {
  static const std::vector<std::string> inv = [] {
    std::vector<std::string> out;
    for (const char* c : kConsonants) out.emplace_back(c);
    for (const char* v : kVowels) {
      out.emplace_back(v);
      for (const char* s : {"0", "1", "2"}) out.push_back(std::string(v) + s);
    }
    return out;
  }();
  return inv;
}

std::string strip_stress(std::string_view phone) {
  std::string out(phone);
  while (!out.empty() && out.back() >= '0' && out.back() <= '9') out.pop_back();
  return out;
}

bool is_vowel(std::string_view phone) {
  const std::string base = strip_stress(phone);
  return std::any_of(std::begin(kVowels), std::end(kVowels), [&](const char* v) { return base == v; });
}

Vocabulary make_phoneme_vocab(int dmax) {
  if (dmax < 1) throw std::invalid_argument("dmax must be positive");
  Vocabulary v(VocabKind::kPhonemeClosed);
  for (const auto& p : arpabet_inventory()) v.add(p);
  for (int d = 1; d <= dmax; ++d) v.add(std::to_string(d));
  return v;
}

}  // namespace isodub::codec

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

#include "isodub/codec/sequence.h"

#include <charconv>

#include "isodub/binning/binning.h"
#include "isodub/common/error.h"
#include "isodub/common/io.h"

namespace isodub::codec {

namespace {

// Duration tokens are the decimal strings "1".."dmax".
int duration_value(const std::string& token) {
  if (token.empty() || token.size() > 4) return 0;
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return 0;
  return value;
}

}  // namespace

std::vector<int> encode_text(std::string_view text, const BpeModel& bpe, const Vocabulary& vocab) {
  std::vector<int> ids;
  for (const auto& piece : bpe.encode(text)) ids.push_back(vocab.id_or_unk(piece));
  ids.push_back(Vocabulary::kEos);
  return ids;
}

std::vector<int> encode_source(std::string_view text, std::span<const int> bins, const BpeModel& bpe,
                               const Vocabulary& vocab) {
  if (bins.empty()) throw DataError("encode_source: at least one duration bin is required");
  std::vector<int> ids = encode_text(text, bpe, vocab);
  ids.pop_back();
  ids.push_back(Vocabulary::kDelim);
  for (int b : bins) {
    const auto id = vocab.find("BIN" + std::to_string(b));
    if (!id) throw DataError("encode_source: vocabulary has no token BIN" + std::to_string(b));
    ids.push_back(*id);
  }
  ids.push_back(Vocabulary::kEos);
  return ids;
}

std::size_t DecodedTarget::phone_count() const {
  std::size_t n = 0;
  for (const auto& w : words) n += w.phones.size();
  return n;
}

std::vector<int> encode_target(const corpus::TrainingRecord& record, const Vocabulary& vocab, int dmax,
                               int* clipped) {
  std::vector<int> ids;
  ids.reserve(record.target_phones.size() * 2 + record.target_words.size() + 4);
  std::size_t next_break = 0;
  const auto& phones = record.target_phones;
  for (std::size_t i = 0; i < phones.size(); ++i) {
    if (next_break < record.segment_breaks.size() && record.segment_breaks[next_break] == i) {
      ids.push_back(Vocabulary::kPause);
      ++next_break;
    }
    const auto ph = vocab.find(phones[i].phone);
    if (!ph || vocab.is_special(*ph) || duration_value(phones[i].phone) > 0)
      throw DataError(record.id + ": phoneme '" + phones[i].phone + "' not in closed vocabulary");
    int frames = std::max(1, phones[i].frames);
    if (frames > dmax) {
      frames = dmax;
      if (clipped) ++*clipped;
    }
    ids.push_back(*ph);
    ids.push_back(vocab.find(std::to_string(frames)).value());
    if (i + 1 == phones.size() || phones[i + 1].word_idx != phones[i].word_idx) ids.push_back(Vocabulary::kEow);
  }
  ids.push_back(Vocabulary::kEos);
  return ids;
}

DecodedTarget decode_target(std::span<const int> ids, const Vocabulary& vocab) {
  DecodedTarget out;
  DecodedWord current;
  bool pending_pause = false;
  bool phone_open = false;  // last phone still awaits its duration

  auto close_phone = [&] {
    if (phone_open) {
      ++out.repairs.missing_duration;
      phone_open = false;
    }
  };
  auto close_word = [&](bool explicit_eow) {
    close_phone();
    if (current.phones.empty()) {
      if (explicit_eow) ++out.repairs.stray_token;
      return;
    }
    if (!explicit_eow) ++out.repairs.missing_eow;
    if (pending_pause) {
      out.segment_starts.push_back(out.words.size());
      pending_pause = false;
    }
    out.words.push_back(std::move(current));
    current = {};
  };

  for (int id : ids) {
    if (id == Vocabulary::kEos) break;
    if (id < 0 || id >= vocab.size()) {
      ++out.repairs.stray_token;
      continue;
    }
    if (id == Vocabulary::kEow) {
      close_word(true);
      continue;
    }
    if (id == Vocabulary::kPause) {
      close_word(false);
      if (out.words.empty() || pending_pause) ++out.repairs.stray_pause;
      else pending_pause = true;
      continue;
    }
    if (vocab.is_special(id)) {
      ++out.repairs.stray_token;
      continue;
    }
    const std::string& tok = vocab.token(id);
    if (const int frames = duration_value(tok); frames > 0) {
      if (phone_open) {
        current.phones.back().frames = frames;
        phone_open = false;
      } else {
        ++out.repairs.dangling_duration;
      }
      continue;
    }
    close_phone();
    current.phones.push_back({tok, 1});
    phone_open = true;
  }
  close_word(false);
  if (pending_pause) ++out.repairs.stray_pause;
  return out;
}

DecodedTarget target_structure(const corpus::TrainingRecord& record) {
  DecodedTarget out;
  std::size_t next_break = 0;
  const auto& phones = record.target_phones;
  for (std::size_t i = 0; i < phones.size(); ++i) {
    const bool new_word = i == 0 || phones[i].word_idx != phones[i - 1].word_idx;
    if (next_break < record.segment_breaks.size() && record.segment_breaks[next_break] == i) {
      out.segment_starts.push_back(out.words.size());
      ++next_break;
    }
    if (new_word) out.words.emplace_back();
    out.words.back().phones.push_back({phones[i].phone, phones[i].frames});
  }
  return out;
}

std::vector<std::int64_t> render_timing(const DecodedTarget& target, int frame_ms) {
  std::vector<std::int64_t> out;
  if (target.words.empty()) return out;
  std::size_t next = 0;
  out.push_back(0);
  for (std::size_t w = 0; w < target.words.size(); ++w) {
    if (next < target.segment_starts.size() && target.segment_starts[next] == w) {
      out.push_back(0);
      ++next;
    }
    for (const auto& p : target.words[w].phones) out.back() += static_cast<std::int64_t>(p.frames) * frame_ms;
  }
  return out;
}

std::string format_tokens(std::span<const int> ids, const Vocabulary& vocab) {
  std::string out;
  for (int id : ids) {
    if (id == Vocabulary::kBos || id == Vocabulary::kEos || id == Vocabulary::kPad) continue;
    if (!out.empty()) out += ' ';
    out += vocab.token(id);
  }
  return out;
}

std::vector<int> parse_tokens(std::string_view text, const Vocabulary& vocab) {
  std::vector<int> ids;
  for (const auto& t : split_whitespace(text)) ids.push_back(vocab.id_or_unk(t));
  return ids;
}

}  // namespace isodub::codec

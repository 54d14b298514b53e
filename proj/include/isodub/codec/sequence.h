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

#ifndef ISODUB_CODEC_SEQUENCE_H_
#define ISODUB_CODEC_SEQUENCE_H_

// Source and target sequence formats.
//
//   source:  <bpe tokens> DELIM BIN7 BIN2 </s>
//   target:  L 10 EH1 6 T 15 EOW PAUSE W 4 ... EOW </s>
//
// Every phoneme is followed by exactly one duration token (frames), EOW
// closes each word and PAUSE separates segments.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isodub/codec/bpe.h"
#include "isodub/codec/vocab.h"
#include "isodub/corpus/corpus.h"

namespace isodub::codec {

// Text tokens, then DELIM and one BIN token per segment, then EOS.
std::vector<int> encode_source(std::string_view text, std::span<const int> bins, const BpeModel& bpe,
                               const Vocabulary& vocab);
// Text tokens then EOS; used by the modes that take no durations.
std::vector<int> encode_text(std::string_view text, const BpeModel& bpe, const Vocabulary& vocab);

struct DecodedPhone {
  std::string phone;
  int frames = 1;
  bool operator==(const DecodedPhone&) const = default;
};

struct DecodedWord {
  std::vector<DecodedPhone> phones;
  bool operator==(const DecodedWord&) const = default;
};

struct RepairCounts {
  int missing_duration = 0;   // phoneme without a duration -> 1 frame
  int dangling_duration = 0;  // duration without a phoneme -> dropped
  int missing_eow = 0;        // open word at PAUSE/EOS -> closed
  int stray_pause = 0;        // PAUSE with no preceding word, or repeated
  int stray_token = 0;        // specials or text tokens where none belong

  int total() const { return missing_duration + dangling_duration + missing_eow + stray_pause + stray_token; }
};

struct DecodedTarget {
  std::vector<DecodedWord> words;
  // Word index at which each segment after the first begins.
  std::vector<std::size_t> segment_starts;
  RepairCounts repairs;

  std::size_t segment_count() const { return words.empty() ? 0 : segment_starts.size() + 1; }
  std::size_t phone_count() const;
  bool operator==(const DecodedTarget& o) const {
    return words == o.words && segment_starts == o.segment_starts;
  }
};

// Frames above dmax are clipped to dmax (counted in *clipped if given).
// Throws DataError on a phoneme outside the closed vocabulary.
std::vector<int> encode_target(const corpus::TrainingRecord& record, const Vocabulary& vocab,
                               int dmax = kDefaultMaxDuration, int* clipped = nullptr);

// Total inverse of encode_target with the repair rules in RepairCounts.
// Decoding stops at the first EOS.
DecodedTarget decode_target(std::span<const int> ids, const Vocabulary& vocab);

// The word/segment structure that encode_target produces for a record.
DecodedTarget target_structure(const corpus::TrainingRecord& record);

// Dub duration per segment: sum of frames times frame_ms.
std::vector<std::int64_t> render_timing(const DecodedTarget& target, int frame_ms);

// Space-separated token strings; BOS/EOS/PAD are omitted.
std::string format_tokens(std::span<const int> ids, const Vocabulary& vocab);
std::vector<int> parse_tokens(std::string_view text, const Vocabulary& vocab);

}  // namespace isodub::codec

#endif  // ISODUB_CODEC_SEQUENCE_H_

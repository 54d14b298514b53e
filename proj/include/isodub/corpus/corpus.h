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

#ifndef ISODUB_CORPUS_CORPUS_H_
#define ISODUB_CORPUS_CORPUS_H_

// Forced-alignment ingestion: pause detection, segmentation at pauses and
// conversion of time-stamped phones into frame-quantized training records.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace isodub::corpus {

inline constexpr std::int64_t kDefaultPauseMs = 300;
inline constexpr int kDefaultFrameMs = 10;

struct PhoneEvent {
  std::string label;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  int word_idx = 0;

  std::int64_t duration_ms() const { return end_ms - start_ms; }
};

struct AlignedUtterance {
  std::string id;
  std::string source_text;
  std::vector<std::string> target_words;
  std::vector<PhoneEvent> phones;
};

struct Gap {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  // Index of the first phone after the gap.
  std::size_t next_phone = 0;

  std::int64_t length_ms() const { return end_ms - start_ms; }
  bool operator==(const Gap&) const = default;
};

// A stretch of speech between pauses. phone_begin/phone_end are a half-open
// range into the utterance's phones.
struct Segment {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::size_t phone_begin = 0;
  std::size_t phone_end = 0;
  std::int64_t duration_ms = 0;
};

struct TargetPhone {
  std::string phone;
  int frames = 1;
  int word_idx = 0;

  bool operator==(const TargetPhone&) const = default;
};

struct TrainingRecord {
  std::string id;
  std::string source_text;
  std::vector<std::string> target_words;
  std::vector<std::int64_t> segment_durations_ms;
  std::vector<TargetPhone> target_phones;
  // Phone index at which each segment after the first begins.
  std::vector<std::size_t> segment_breaks;

  std::size_t pause_count() const { return segment_breaks.size(); }
  bool operator==(const TrainingRecord&) const = default;
};

struct PauseStats {
  std::size_t samples = 0;
  std::size_t one_plus = 0;
  std::size_t two_plus = 0;

  double pct_one_plus() const;
  double pct_two_plus() const;
  std::string table() const;
};

// Throws StructuralError for unsorted/overlapping phones or word indices out
// of range, DataError for words that own no phone.
void validate(const AlignedUtterance& utt);

// Inter-phone gaps of at least threshold_ms. Leading and trailing silence is
// never reported.
std::vector<Gap> detect_pauses(std::span<const PhoneEvent> phones,
                               std::int64_t threshold_ms);

// Partitions the phones at detected pauses. A pause that falls inside a
// word is rejected with DataError.
std::vector<Segment> segment_utterance(const AlignedUtterance& utt,
                                       std::int64_t threshold_ms);

// frames = max(1, round(duration / frame_ms)), half rounded up.
int quantize_frames(std::int64_t duration_ms, int frame_ms);

TrainingRecord build_training_record(const AlignedUtterance& utt,
                                     std::span<const Segment> segments,
                                     int frame_ms);

PauseStats corpus_stats(std::span<const TrainingRecord> records);

// Alignment interchange format (one JSON object per line).
AlignedUtterance parse_alignment(const nlohmann::json& j);
AlignedUtterance parse_alignment_line(std::string_view line);
nlohmann::json to_json(const AlignedUtterance& utt);

nlohmann::json to_json(const TrainingRecord& rec);
TrainingRecord record_from_json(const nlohmann::json& j);

std::vector<TrainingRecord> read_records(const std::string& path);
std::string records_to_jsonl(std::span<const TrainingRecord> records);

}  // namespace isodub::corpus

#endif  // ISODUB_CORPUS_CORPUS_H_

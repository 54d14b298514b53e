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

#ifndef ISODUB_VAD_VAD_H_
#define ISODUB_VAD_VAD_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "isodub/binning/binning.h"
#include "json.hpp"

namespace isodub::vad {

struct VadConfig {
  int frame_ms = 10;
  double threshold_db = -35.0;  // relative to the loudest frame
  int min_pause_ms = 300;
  int min_speech_ms = 100;

  // Throws std::invalid_argument.
  void validate() const;
  nlohmann::json to_json() const;
};

struct SpeechSegment {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::int64_t dur_ms() const { return end_ms - start_ms; }
  bool operator==(const SpeechSegment&) const = default;
};

// Frame RMS energy against a threshold relative to the peak frame. Silent
// runs shorter than min_pause_ms are bridged; speech runs shorter than
// min_speech_ms join the nearer neighbour. Silent input gives [].
std::vector<SpeechSegment> detect_segments(std::span<const std::int16_t> samples, int rate_hz,
                                           const VadConfig& config = {});

std::vector<std::int64_t> segment_durations(std::span<const SpeechSegment> segments);

// Bin index per segment. Throws DataError on an empty list.
std::vector<int> segments_to_bins(std::span<const SpeechSegment> segments, const binning::BinBoundaries& bins);

nlohmann::json segments_to_json(std::span<const SpeechSegment> segments);
std::vector<SpeechSegment> segments_from_json(const nlohmann::json& j);

}  // namespace isodub::vad

#endif  // ISODUB_VAD_VAD_H_

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

#ifndef ISODUB_NOISE_NOISE_H_
#define ISODUB_NOISE_NOISE_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "isodub/corpus/corpus.h"

namespace isodub::noise {

enum class NoiseMode {
  kRelative,    // d * (1 + eps), eps ~ N(0, sigma^2)
  kAbsoluteMs,  // d + eps,       eps ~ N(0, sigma^2) in milliseconds
};

struct NoiseSpec {
  double sigma = 0.0;
  int oversample = 1;
  std::uint64_t seed = 0;
  NoiseMode mode = NoiseMode::kRelative;
  // Perturbed durations never drop below one frame.
  std::int64_t min_ms = corpus::kDefaultFrameMs;
};

void validate(const NoiseSpec& spec);

// Independent draw per segment. The stream is keyed on (seed, record id,
// draw index), so the result does not depend on processing order.
std::vector<std::int64_t> perturb_durations(std::span<const std::int64_t> seg_ms, const NoiseSpec& spec,
                                            std::string_view record_id, int draw_index);

// Each record `oversample` times in a row, copy i perturbed with draw index
// i. Only segment_durations_ms changes.
std::vector<corpus::TrainingRecord> oversample_records(std::span<const corpus::TrainingRecord> records,
                                                       const NoiseSpec& spec);

NoiseMode parse_mode(std::string_view name);
std::string_view mode_name(NoiseMode mode);

}  // namespace isodub::noise

#endif  // ISODUB_NOISE_NOISE_H_

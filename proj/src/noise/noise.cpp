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

#include "isodub/noise/noise.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "isodub/common/error.h"
#include "isodub/common/hash.h"
#include "isodub/common/rng.h"

namespace isodub::noise {

void validate(const NoiseSpec& spec) {
  if (!(spec.sigma >= 0.0)) throw UsageError("noise.sigma must be non-negative");
  if (spec.oversample < 1) throw UsageError("noise.oversample must be at least 1");
  if (spec.min_ms < 1) throw UsageError("noise minimum duration must be positive");
}

std::vector<std::int64_t> perturb_durations(std::span<const std::int64_t> seg_ms, const NoiseSpec& spec,
                                            std::string_view record_id, int draw_index) {
  validate(spec);
  std::vector<std::int64_t> out(seg_ms.begin(), seg_ms.end());
  if (spec.sigma == 0.0) return out;
  auto gen = substream(spec.seed, "noise", {fnv1a64(record_id), static_cast<std::uint64_t>(draw_index)});
  std::normal_distribution<double> normal(0.0, spec.sigma);
  for (auto& d : out) {
    const double eps = normal(gen);
    const double v = spec.mode == NoiseMode::kRelative ? static_cast<double>(d) * (1.0 + eps)
                                                       : static_cast<double>(d) + eps;
    d = std::max<std::int64_t>(spec.min_ms, std::llround(v));
  }
  return out;
}

std::vector<corpus::TrainingRecord> oversample_records(std::span<const corpus::TrainingRecord> records,
                                                       const NoiseSpec& spec) {
  validate(spec);
  std::vector<corpus::TrainingRecord> out;
  out.reserve(records.size() * static_cast<std::size_t>(spec.oversample));
  for (const auto& r : records) {
    for (int i = 0; i < spec.oversample; ++i) {
      out.push_back(r);
      out.back().segment_durations_ms = perturb_durations(r.segment_durations_ms, spec, r.id, i);
    }
  }
  return out;
}

NoiseMode parse_mode(std::string_view name) {
  if (name == "relative") return NoiseMode::kRelative;
  if (name == "absolute" || name == "absolute_ms") return NoiseMode::kAbsoluteMs;
  throw UsageError("unknown noise mode '" + std::string(name) + "'");
}

std::string_view mode_name(NoiseMode mode) { return mode == NoiseMode::kRelative ? "relative" : "absolute"; }

}  // namespace isodub::noise

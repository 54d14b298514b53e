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

#include "isodub/vad/vad.h"

#include <cmath>
#include <stdexcept>

#include "isodub/common/error.h"
#include "isodub/vad/wav.h"

namespace isodub::vad {

void VadConfig::validate() const {
  if (frame_ms <= 0 || min_pause_ms <= 0 || min_speech_ms <= 0)
    throw std::invalid_argument("vad: frame_ms, min_pause_ms and min_speech_ms must be positive");
  if (!(threshold_db < 0.0)) throw std::invalid_argument("vad: threshold_db must be negative");
}

nlohmann::json VadConfig::to_json() const {
  return {{"frame_ms", frame_ms}, {"threshold_db", threshold_db}, {"min_pause_ms", min_pause_ms},
          {"min_speech_ms", min_speech_ms}};
}

namespace {

struct Run {
  std::size_t begin, end;  // frames, half-open
};

}  // namespace

std::vector<SpeechSegment> detect_segments(std::span<const std::int16_t> samples, int rate_hz,
                                           const VadConfig& config) {
  config.validate();
  if (!supported_rate(rate_hz)) throw DataError("vad: unsupported sample rate " + std::to_string(rate_hz));
  // Frame i covers samples [floor(i*step), floor((i+1)*step)), so 22.05 kHz
  // frames stay on the millisecond grid.
  const double step = static_cast<double>(rate_hz) * config.frame_ms / 1000.0;
  const auto frames = static_cast<std::size_t>(std::floor(static_cast<double>(samples.size()) / step));
  if (frames == 0) throw DataError("vad: audio shorter than one frame");

  std::vector<double> rms(frames);
  double peak = 0.0;
  for (std::size_t f = 0; f < frames; ++f) {
    const auto a = static_cast<std::size_t>(std::floor(f * step));
    const auto b = static_cast<std::size_t>(std::floor((f + 1) * step));
    double acc = 0.0;
    for (std::size_t i = a; i < b; ++i) acc += static_cast<double>(samples[i]) * samples[i];
    rms[f] = std::sqrt(acc / static_cast<double>(b - a));
    peak = std::max(peak, rms[f]);
  }
  if (peak == 0.0) return {};
  const double threshold = peak * std::pow(10.0, config.threshold_db / 20.0);

  std::vector<Run> runs;
  for (std::size_t f = 0; f < frames; ++f) {
    if (rms[f] < threshold) continue;
    if (!runs.empty() && runs.back().end == f)
      runs.back().end = f + 1;
    else
      runs.push_back({f, f + 1});
  }
  if (runs.empty()) return {};

  const auto to_ms = [&](std::size_t frame) { return static_cast<std::int64_t>(frame) * config.frame_ms; };

  // Bridge gaps shorter than a pause.
  std::vector<Run> bridged{runs.front()};
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (to_ms(runs[i].begin) - to_ms(bridged.back().end) < config.min_pause_ms)
      bridged.back().end = runs[i].end;
    else
      bridged.push_back(runs[i]);
  }

  // Fold short runs into the neighbour across the smaller gap (the earlier
  // one on ties). A lone short run is kept.
  bool changed = true;
  while (changed && bridged.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i < bridged.size(); ++i) {
      if (to_ms(bridged[i].end) - to_ms(bridged[i].begin) >= config.min_speech_ms) continue;
      const bool has_prev = i > 0, has_next = i + 1 < bridged.size();
      const std::size_t gap_prev = has_prev ? bridged[i].begin - bridged[i - 1].end : SIZE_MAX;
      const std::size_t gap_next = has_next ? bridged[i + 1].begin - bridged[i].end : SIZE_MAX;
      if (gap_prev <= gap_next) {
        bridged[i - 1].end = bridged[i].end;
      } else {
        bridged[i + 1].begin = bridged[i].begin;
      }
      bridged.erase(bridged.begin() + static_cast<std::ptrdiff_t>(i));
      changed = true;
      break;
    }
  }

  std::vector<SpeechSegment> out;
  out.reserve(bridged.size());
  for (const auto& r : bridged) out.push_back({to_ms(r.begin), to_ms(r.end)});
  return out;
}

std::vector<std::int64_t> segment_durations(std::span<const SpeechSegment> segments) {
  std::vector<std::int64_t> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(s.dur_ms());
  return out;
}

std::vector<int> segments_to_bins(std::span<const SpeechSegment> segments, const binning::BinBoundaries& bins) {
  if (segments.empty()) throw DataError("no speech segments: nothing to dub");
  std::vector<int> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(binning::assign_bin(static_cast<double>(s.dur_ms()), bins));
  return out;
}

nlohmann::json segments_to_json(std::span<const SpeechSegment> segments) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : segments) arr.push_back({{"start_ms", s.start_ms}, {"end_ms", s.end_ms}, {"dur_ms", s.dur_ms()}});
  return {{"segments", arr}};
}

std::vector<SpeechSegment> segments_from_json(const nlohmann::json& j) {
  std::vector<SpeechSegment> out;
  try {
    for (const auto& s : j.at("segments")) {
      SpeechSegment seg{s.at("start_ms").get<std::int64_t>(), s.at("end_ms").get<std::int64_t>()};
      if (seg.end_ms <= seg.start_ms) throw DataError("segment with non-positive duration");
      out.push_back(seg);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("segments json: ") + e.what());
  }
  return out;
}

}  // namespace isodub::vad

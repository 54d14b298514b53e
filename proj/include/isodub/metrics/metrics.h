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

#ifndef ISODUB_METRICS_METRICS_H_
#define ISODUB_METRICS_METRICS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace isodub::metrics {

// 1 - |src - dub| / src, unclamped. Throws std::invalid_argument if
// src_ms <= 0 or dub_ms < 0.
double speech_overlap(double src_ms, double dub_ms);

struct SegmentPair {
  double src_ms = 0.0;
  double dub_ms = 0.0;
};

// Mean speech overlap over all segments. Throws on an empty list.
double corpus_speech_overlap(std::span<const SegmentPair> pairs);

// Pairs segments in order. Source segments without a dub counterpart get
// dub 0; surplus dub segments are added to the last source segment.
std::vector<SegmentPair> align_segments(std::span<const std::int64_t> src_ms, std::span<const std::int64_t> dub_ms);

// Corpus BLEU with single references, lowercasing, whitespace tokens and
// exponential smoothing of zero-match orders.
inline constexpr int kBleuOrder = 4;

struct BleuStats {
  std::array<std::int64_t, kBleuOrder> correct{};
  std::array<std::int64_t, kBleuOrder> total{};
  std::int64_t sys_len = 0;
  std::int64_t ref_len = 0;

  BleuStats& operator+=(const BleuStats& o);
  nlohmann::json to_json() const;
};

BleuStats sentence_stats(std::string_view hypothesis, std::string_view reference);
double bleu_from_stats(const BleuStats& stats);
// Throws std::invalid_argument on a length mismatch.
double corpus_bleu(std::span<const std::string> hypotheses, std::span<const std::string> references);

// Code points of target over code points of source, whitespace included.
double isometry_ratio(std::string_view source_text, std::string_view target_text);

struct EvalSample {
  std::string id;
  std::string hypothesis;
  std::string reference;
  std::string source_text;                         // empty: no isometry
  std::vector<std::int64_t> src_segments_ms;
  std::optional<std::vector<std::int64_t>> dub_segments_ms;  // none: no timing (text output)
};

struct SampleRow {
  std::string id;
  BleuStats stats;
  std::vector<SegmentPair> segments;
  std::optional<double> so;            // mean over this sample's segments
  std::optional<double> utterance_so;  // totals over the whole utterance
  std::int64_t src_ms = 0;
  std::optional<std::int64_t> dub_ms;
  std::optional<double> isometry;
};

struct EvalReport {
  std::string system;
  double bleu = 0.0;
  std::optional<double> so;  // mean over all segments of all samples
  std::optional<double> utterance_so;
  std::size_t segments = 0;
  std::size_t negative_so_segments = 0;
  std::optional<double> isometry;
  std::vector<SampleRow> rows;

  nlohmann::json to_json() const;
};

EvalReport evaluate(std::string system, std::span<const EvalSample> samples);

// "System  BLEU  SO" rows, one per report.
std::string format_table(std::span<const EvalReport> reports);

}  // namespace isodub::metrics

#endif  // ISODUB_METRICS_METRICS_H_

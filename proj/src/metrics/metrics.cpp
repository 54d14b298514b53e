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

#include "isodub/metrics/metrics.h"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>

#include "isodub/common/io.h"

namespace isodub::metrics {

double speech_overlap(double src_ms, double dub_ms) {
  if (!(src_ms > 0.0)) throw std::invalid_argument("speech overlap needs a positive source duration");
  if (dub_ms < 0.0) throw std::invalid_argument("dub duration must be non-negative");
  return 1.0 - std::abs(src_ms - dub_ms) / src_ms;
}

double corpus_speech_overlap(std::span<const SegmentPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("speech overlap over an empty segment list");
  double sum = 0.0;
  for (const auto& p : pairs) sum += speech_overlap(p.src_ms, p.dub_ms);
  return sum / static_cast<double>(pairs.size());
}

std::vector<SegmentPair> align_segments(std::span<const std::int64_t> src_ms, std::span<const std::int64_t> dub_ms) {
  std::vector<SegmentPair> out;
  out.reserve(src_ms.size());
  for (std::size_t i = 0; i < src_ms.size(); ++i)
    out.push_back({static_cast<double>(src_ms[i]), i < dub_ms.size() ? static_cast<double>(dub_ms[i]) : 0.0});
  if (!out.empty())
    for (std::size_t i = src_ms.size(); i < dub_ms.size(); ++i) out.back().dub_ms += static_cast<double>(dub_ms[i]);
  return out;
}

BleuStats& BleuStats::operator+=(const BleuStats& o) {
  for (int n = 0; n < kBleuOrder; ++n) {
    correct[n] += o.correct[n];
    total[n] += o.total[n];
  }
  sys_len += o.sys_len;
  ref_len += o.ref_len;
  return *this;
}

nlohmann::json BleuStats::to_json() const {
  return {{"correct", correct}, {"total", total}, {"sys_len", sys_len}, {"ref_len", ref_len}};
}

namespace {

std::vector<std::string> bleu_tokens(std::string_view text) {
  std::string lowered(text);
  for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return split_whitespace(lowered);
}

std::map<std::vector<std::string>, std::int64_t> ngram_counts(const std::vector<std::string>& toks, int n) {
  std::map<std::vector<std::string>, std::int64_t> counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) ++counts[std::vector<std::string>(toks.begin() + i, toks.begin() + i + n)];
  return counts;
}

}  // namespace

BleuStats sentence_stats(std::string_view hypothesis, std::string_view reference) {
  const auto hyp = bleu_tokens(hypothesis);
  const auto ref = bleu_tokens(reference);
  BleuStats s;
  s.sys_len = static_cast<std::int64_t>(hyp.size());
  s.ref_len = static_cast<std::int64_t>(ref.size());
  for (int n = 1; n <= kBleuOrder; ++n) {
    const auto h = ngram_counts(hyp, n);
    const auto r = ngram_counts(ref, n);
    s.total[n - 1] = std::max<std::int64_t>(0, s.sys_len - n + 1);
    for (const auto& [gram, count] : h) {
      const auto it = r.find(gram);
      if (it != r.end()) s.correct[n - 1] += std::min(count, it->second);
    }
  }
  return s;
}

double bleu_from_stats(const BleuStats& stats) {
  constexpr double kLogZero = -9999999999.0;
  std::array<double, kBleuOrder> precisions{};
  double smooth = 1.0;
  for (int n = 0; n < kBleuOrder; ++n) {
    if (stats.total[n] == 0) break;
    if (stats.correct[n] == 0) {
      smooth *= 2.0;
      precisions[n] = 1.0 / (smooth * static_cast<double>(stats.total[n]));
    } else {
      precisions[n] = static_cast<double>(stats.correct[n]) / static_cast<double>(stats.total[n]);
    }
  }
  double bp = 1.0;
  if (stats.sys_len < stats.ref_len)
    bp = stats.sys_len > 0 ? std::exp(1.0 - static_cast<double>(stats.ref_len) / static_cast<double>(stats.sys_len))
                           : 0.0;
  double log_sum = 0.0;
  for (const double p : precisions) log_sum += p == 0.0 ? kLogZero : std::log(p);
  // Precisions as fractions so a perfect match scores exactly 100.
  return 100.0 * bp * std::exp(log_sum / kBleuOrder);
}

double corpus_bleu(std::span<const std::string> hypotheses, std::span<const std::string> references) {
  if (hypotheses.size() != references.size())
    throw std::invalid_argument("BLEU needs one reference per hypothesis (" + std::to_string(hypotheses.size()) +
                                " vs " + std::to_string(references.size()) + ")");
  BleuStats total;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) total += sentence_stats(hypotheses[i], references[i]);
  return bleu_from_stats(total);
}

double isometry_ratio(std::string_view source_text, std::string_view target_text) {
  const std::size_t src = utf8_length(source_text);
  if (src == 0) throw std::invalid_argument("isometry ratio of an empty source");
  return static_cast<double>(utf8_length(target_text)) / static_cast<double>(src);
}

EvalReport evaluate(std::string system, std::span<const EvalSample> samples) {
  EvalReport report;
  report.system = std::move(system);
  BleuStats totals;
  double so_sum = 0.0, utt_sum = 0.0, iso_sum = 0.0;
  std::size_t utt_n = 0, iso_n = 0;
  for (const auto& s : samples) {
    SampleRow row;
    row.id = s.id;
    row.stats = sentence_stats(s.hypothesis, s.reference);
    totals += row.stats;
    row.src_ms = std::accumulate(s.src_segments_ms.begin(), s.src_segments_ms.end(), std::int64_t{0});
    if (s.dub_segments_ms) {
      row.dub_ms = std::accumulate(s.dub_segments_ms->begin(), s.dub_segments_ms->end(), std::int64_t{0});
      row.segments = align_segments(s.src_segments_ms, *s.dub_segments_ms);
      if (!row.segments.empty()) {
        double sample_sum = 0.0;
        for (const auto& p : row.segments) {
          const double so = speech_overlap(p.src_ms, p.dub_ms);
          sample_sum += so;
          so_sum += so;
          report.negative_so_segments += so < 0.0;
        }
        report.segments += row.segments.size();
        row.so = sample_sum / static_cast<double>(row.segments.size());
        row.utterance_so = speech_overlap(static_cast<double>(row.src_ms), static_cast<double>(*row.dub_ms));
        utt_sum += *row.utterance_so;
        ++utt_n;
      }
    }
    if (!s.source_text.empty()) {
      row.isometry = isometry_ratio(s.source_text, s.hypothesis);
      iso_sum += *row.isometry;
      ++iso_n;
    }
    report.rows.push_back(std::move(row));
  }
  report.bleu = bleu_from_stats(totals);
  if (report.segments) report.so = so_sum / static_cast<double>(report.segments);
  if (utt_n) report.utterance_so = utt_sum / static_cast<double>(utt_n);
  if (iso_n) report.isometry = iso_sum / static_cast<double>(iso_n);
  return report;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json EvalReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& p : r.segments) segs.push_back({{"src_ms", p.src_ms}, {"dub_ms", p.dub_ms}});
    rows_json.push_back({{"id", r.id},
                         {"bleu_stats", r.stats.to_json()},
                         {"so", opt(r.so)},
                         {"utterance_so", opt(r.utterance_so)},
                         {"src_ms", r.src_ms},
                         {"dub_ms", r.dub_ms ? nlohmann::json(*r.dub_ms) : nlohmann::json(nullptr)},
                         {"isometry", opt(r.isometry)},
                         {"segments", segs}});
  }
  return {{"system", system},
          {"bleu", bleu},
          {"so", opt(so)},
          {"utterance_so", opt(utterance_so)},
          {"segments", segments},
          {"negative_so_segments", negative_so_segments},
          {"isometry", opt(isometry)},
          {"samples", rows.size()},
          {"rows", rows_json}};
}

std::string format_table(std::span<const EvalReport> reports) {
  std::size_t width = 6;
  for (const auto& r : reports) width = std::max(width, r.system.size());
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-*s  %6s  %5s\n", static_cast<int>(width), "System", "BLEU", "SO");
  out += buf;
  out += std::string(width + 15, '-') + "\n";
  for (const auto& r : reports) {
    char so[16];
    if (r.so)
      std::snprintf(so, sizeof so, "%5.2f", *r.so);
    else
      std::snprintf(so, sizeof so, "%5s", "-");
    std::snprintf(buf, sizeof buf, "%-*s  %6.1f  %s\n", static_cast<int>(width), r.system.c_str(), r.bleu, so);
    out += buf;
  }
  return out;
}

}  // namespace isodub::metrics

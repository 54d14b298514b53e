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

#include "isodub/corpus/corpus.h"

#include <cstdio>
#include <sstream>

#include "isodub/common/error.h"
#include "isodub/common/io.h"

namespace isodub::corpus {

using nlohmann::json;

namespace {

void check_phone_order(std::span<const PhoneEvent> phones) {
  for (std::size_t i = 0; i < phones.size(); ++i) {
    const auto& p = phones[i];
    if (p.start_ms < 0) throw StructuralError("phone " + std::to_string(i) + " starts before 0");
    if (p.end_ms <= p.start_ms)
      throw StructuralError("phone " + std::to_string(i) + " (" + p.label + ") has end_ms <= start_ms");
    if (i > 0 && p.start_ms < phones[i - 1].end_ms)
      throw StructuralError("phone " + std::to_string(i) + " overlaps or precedes its predecessor");
    if (i > 0 && p.word_idx < phones[i - 1].word_idx)
      throw StructuralError("word_idx decreases at phone " + std::to_string(i));
  }
}

}  // namespace

double PauseStats::pct_one_plus() const {
  return samples ? 100.0 * static_cast<double>(one_plus) / static_cast<double>(samples) : 0.0;
}

double PauseStats::pct_two_plus() const {
  return samples ? 100.0 * static_cast<double>(two_plus) / static_cast<double>(samples) : 0.0;
}

std::string PauseStats::table() const {
  char buf[256];
  std::ostringstream out;
  std::snprintf(buf, sizeof(buf), "# samples                  %zu\n", samples);
  out << buf;
  std::snprintf(buf, sizeof(buf), "# samples with 1+ pauses   %zu\n", one_plus);
  out << buf;
  std::snprintf(buf, sizeof(buf), "%% samples with 1+ pauses   %.1f%%\n", pct_one_plus());
  out << buf;
  std::snprintf(buf, sizeof(buf), "# samples with 2+ pauses   %zu\n", two_plus);
  out << buf;
  std::snprintf(buf, sizeof(buf), "%% samples with 2+ pauses   %.1f%%\n", pct_two_plus());
  out << buf;
  return out.str();
}

void validate(const AlignedUtterance& utt) {
  check_phone_order(utt.phones);
  std::vector<int> owned(utt.target_words.size(), 0);
  for (const auto& p : utt.phones) {
    if (p.word_idx < 0 || static_cast<std::size_t>(p.word_idx) >= utt.target_words.size())
      throw StructuralError(utt.id + ": word_idx " + std::to_string(p.word_idx) + " out of range");
    ++owned[static_cast<std::size_t>(p.word_idx)];
  }
  for (std::size_t w = 0; w < owned.size(); ++w)
    if (owned[w] == 0)
      throw DataError(utt.id + ": word '" + utt.target_words[w] + "' owns no phone");
}

std::vector<Gap> detect_pauses(std::span<const PhoneEvent> phones, std::int64_t threshold_ms) {
  if (threshold_ms <= 0) throw std::invalid_argument("pause threshold must be positive");
  check_phone_order(phones);
  std::vector<Gap> gaps;
  for (std::size_t i = 1; i < phones.size(); ++i) {
    const std::int64_t gap = phones[i].start_ms - phones[i - 1].end_ms;
    if (gap >= threshold_ms) gaps.push_back({phones[i - 1].end_ms, phones[i].start_ms, i});
  }
  return gaps;
}

std::vector<Segment> segment_utterance(const AlignedUtterance& utt, std::int64_t threshold_ms) {
  validate(utt);
  const auto gaps = detect_pauses(utt.phones, threshold_ms);
  std::vector<Segment> segments;
  if (utt.phones.empty()) return segments;

  std::size_t begin = 0;
  auto close = [&](std::size_t end) {
    Segment s;
    s.phone_begin = begin;
    s.phone_end = end;
    s.start_ms = utt.phones[begin].start_ms;
    s.end_ms = utt.phones[end - 1].end_ms;
    for (std::size_t i = begin; i < end; ++i) s.duration_ms += utt.phones[i].duration_ms();
    segments.push_back(s);
    begin = end;
  };
  for (const auto& g : gaps) {
    if (utt.phones[g.next_phone].word_idx == utt.phones[g.next_phone - 1].word_idx)
      throw DataError(utt.id + ": pause inside word '" +
                      utt.target_words[static_cast<std::size_t>(utt.phones[g.next_phone].word_idx)] + "'");
    close(g.next_phone);
  }
  close(utt.phones.size());
  return segments;
}

int quantize_frames(std::int64_t duration_ms, int frame_ms) {
  if (frame_ms <= 0) throw std::invalid_argument("frame_ms must be positive");
  if (duration_ms <= 0) return 1;
  const std::int64_t frames = (2 * duration_ms + frame_ms) / (2 * static_cast<std::int64_t>(frame_ms));
  return static_cast<int>(std::max<std::int64_t>(1, frames));
}

TrainingRecord build_training_record(const AlignedUtterance& utt, std::span<const Segment> segments,
                                     int frame_ms) {
  TrainingRecord rec;
  rec.id = utt.id;
  rec.source_text = utt.source_text;
  rec.target_words = utt.target_words;
  rec.target_phones.reserve(utt.phones.size());
  for (const auto& p : utt.phones)
    rec.target_phones.push_back({p.label, quantize_frames(p.duration_ms(), frame_ms), p.word_idx});
  for (std::size_t s = 0; s < segments.size(); ++s) {
    rec.segment_durations_ms.push_back(segments[s].duration_ms);
    if (s > 0) rec.segment_breaks.push_back(segments[s].phone_begin);
  }
  return rec;
}

PauseStats corpus_stats(std::span<const TrainingRecord> records) {
  if (records.empty()) throw DataError("corpus_stats: empty corpus");
  PauseStats st;
  st.samples = records.size();
  for (const auto& r : records) {
    if (r.pause_count() >= 1) ++st.one_plus;
    if (r.pause_count() >= 2) ++st.two_plus;
  }
  return st;
}

AlignedUtterance parse_alignment(const json& j) {
  AlignedUtterance utt;
  try {
    utt.id = j.at("id").get<std::string>();
    utt.source_text = j.at("source_text").get<std::string>();
    utt.target_words = j.at("target_words").get<std::vector<std::string>>();
    for (const auto& p : j.at("phones")) {
      PhoneEvent ev;
      ev.label = p.at("ph").get<std::string>();
      ev.start_ms = p.at("start_ms").get<std::int64_t>();
      ev.end_ms = p.at("end_ms").get<std::int64_t>();
      ev.word_idx = p.at("word_idx").get<int>();
      utt.phones.push_back(std::move(ev));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("alignment record: ") + e.what());
  }
  return utt;
}

AlignedUtterance parse_alignment_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  return parse_alignment(j);
}

json to_json(const AlignedUtterance& utt) {
  json phones = json::array();
  for (const auto& p : utt.phones)
    phones.push_back({{"ph", p.label}, {"start_ms", p.start_ms}, {"end_ms", p.end_ms}, {"word_idx", p.word_idx}});
  return {{"id", utt.id}, {"source_text", utt.source_text}, {"target_words", utt.target_words}, {"phones", phones}};
}

json to_json(const TrainingRecord& rec) {
  json tgt = json::array();
  for (const auto& p : rec.target_phones) tgt.push_back(json::array({p.phone, p.frames, p.word_idx}));
  return {{"id", rec.id},
          {"src", rec.source_text},
          {"seg_ms", rec.segment_durations_ms},
          {"tgt", tgt},
          {"seg_breaks", rec.segment_breaks},
          {"tgt_words", rec.target_words}};
}

TrainingRecord record_from_json(const json& j) {
  TrainingRecord rec;
  try {
    rec.id = j.at("id").get<std::string>();
    rec.source_text = j.at("src").get<std::string>();
    rec.segment_durations_ms = j.at("seg_ms").get<std::vector<std::int64_t>>();
    for (const auto& t : j.at("tgt"))
      rec.target_phones.push_back({t.at(0).get<std::string>(), t.at(1).get<int>(), t.at(2).get<int>()});
    rec.segment_breaks = j.at("seg_breaks").get<std::vector<std::size_t>>();
    if (j.contains("tgt_words")) rec.target_words = j.at("tgt_words").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("training record: ") + e.what());
  }
  if (rec.segment_durations_ms.size() != rec.segment_breaks.size() + 1)
    throw DataError(rec.id + ": seg_ms and seg_breaks disagree");
  return rec;
}

std::vector<TrainingRecord> read_records(const std::string& path) {
  std::vector<TrainingRecord> out;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string records_to_jsonl(std::span<const TrainingRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

}  // namespace isodub::corpus

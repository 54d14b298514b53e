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


#include <cmath>

#include "audio.h"
#include "doctest.h"
#include "fixtures.h"
#include "isodub/binning/binning.h"
#include "isodub/common/error.h"
#include "isodub/vad/vad.h"
#include "isodub/vad/wav.h"

using namespace isodub;
using namespace isodub::vad;
using isodub::testing::Piece;
using isodub::testing::synth;

namespace {

const std::vector<Piece> kToneGapTone{{300, 0}, {1000, 8000}, {500, 0}, {1000, 8000}, {300, 0}};

void check_two_segments(const std::vector<SpeechSegment>& s) {
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0].start_ms - 300) <= 30);
  CHECK(std::abs(s[0].end_ms - 1300) <= 30);
  CHECK(std::abs(s[1].start_ms - 1800) <= 30);
  CHECK(std::abs(s[1].end_ms - 2800) <= 30);
}

void put16(std::string& b, std::size_t at, std::uint16_t v) {
  b[at] = static_cast<char>(v & 0xff);
  b[at + 1] = static_cast<char>(v >> 8);
}

}  // namespace

TEST_CASE("tone, 500 ms gap, tone gives two segments") {
  for (const int rate : {16000, 22050, 44100, 48000}) {
    CAPTURE(rate);
    check_two_segments(detect_segments(synth(kToneGapTone, rate), rate));
  }
}

TEST_CASE("segmentation is gain invariant") {
  const auto base = detect_segments(synth(kToneGapTone, 16000), 16000);
  for (const double g : {0.25, 4.0}) {
    CAPTURE(g);
    const auto scaled = detect_segments(synth(kToneGapTone, 16000, g), 16000);
    check_two_segments(scaled);
    CHECK(scaled == base);
  }
}

TEST_CASE("silence, short dips and short bursts") {
  CHECK(detect_segments(synth({{2000, 0}}, 16000, 1.0, 0.0), 16000).empty());
  CHECK(detect_segments(synth({{2000, 0}}, 16000), 16000).size() <= 1);

  const auto dip = detect_segments(synth({{200, 0}, {1000, 8000}, {200, 0}, {1000, 8000}, {200, 0}}, 16000), 16000);
  REQUIRE(dip.size() == 1);
  CHECK(std::abs(dip[0].dur_ms() - 2200) <= 40);

  // A 50 ms click after a long pause joins the neighbouring segment.
  const auto click =
      detect_segments(synth({{200, 0}, {1000, 8000}, {600, 0}, {50, 8000}, {200, 0}, {800, 8000}}, 16000), 16000);
  REQUIRE(click.size() == 2);
  CHECK(std::abs(click[1].start_ms - 1800) <= 30);
}

TEST_CASE("configuration") {
  VadConfig c;
  CHECK_NOTHROW(c.validate());
  c.frame_ms = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.threshold_db = 3;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.min_pause_ms = 900;  // the 500 ms gap no longer splits
  CHECK(detect_segments(synth(kToneGapTone, 16000), 16000, c).size() == 1);
  CHECK(VadConfig{}.to_json().at("min_pause_ms") == 300);
  const std::vector<std::int16_t> tiny(5, 100);
  CHECK_THROWS_AS(detect_segments(tiny, 16000), DataError);
}

TEST_CASE("segments to bins") {
  std::vector<std::int64_t> train;
  for (int i = 0; i < 200; ++i) train.push_back(300 + 10 * i);
  const auto bins = binning::fit_bins(train, 20);
  // Cuts fall at 390 + 100 j ms.
  const std::vector<SpeechSegment> segs{{0, 900}, {1300, 1700}, {2000, 4000}, {5000, 9000}};
  const auto ids = segments_to_bins(segs, bins);
  REQUIRE(ids.size() == 4);
  CHECK(ids[0] == binning::assign_bin(900, bins));
  CHECK(ids[0] == 6);
  CHECK(ids[1] == 1);
  CHECK(ids[2] == 17);
  CHECK(ids[3] == 19);
  CHECK(segment_durations(segs) == std::vector<std::int64_t>{900, 400, 2000, 4000});
  CHECK_THROWS_AS(segments_to_bins(std::vector<SpeechSegment>{}, bins), DataError);
}

TEST_CASE("segments JSON") {
  const std::vector<SpeechSegment> segs{{10, 900}, {1300, 1700}};
  const auto j = segments_to_json(segs);
  CHECK(j.at("segments")[0].at("dur_ms") == 890);
  CHECK(segments_from_json(j) == segs);
  CHECK_THROWS_AS(segments_from_json(nlohmann::json{{"segments", {{{"start_ms", 5}}}}}), DataError);
}

TEST_CASE("wav round trip and header checks") {
  PcmAudio a;
  a.rate_hz = 22050;
  a.samples = {0, 1, -1, 32767, -32768, 1234};
  const std::string bytes = encode_wav(a);
  const auto back = parse_wav(bytes);
  CHECK(back.rate_hz == 22050);
  CHECK(back.samples == a.samples);

  testing::TempDir dir("wav");
  write_wav(dir / "a.wav", a);
  CHECK(read_wav(dir / "a.wav").samples == a.samples);

  std::string stereo = bytes;
  put16(stereo, 22, 2);
  CHECK_THROWS_AS(parse_wav(stereo), DataError);
  std::string eight = bytes;
  put16(eight, 34, 8);
  CHECK_THROWS_AS(parse_wav(eight), DataError);
  std::string floaty = bytes;
  put16(floaty, 20, 3);
  CHECK_THROWS_AS(parse_wav(floaty), DataError);
  std::string rate = bytes;
  rate[24] = static_cast<char>(0x40);  // 8000 Hz: 0x1F40
  rate[25] = static_cast<char>(0x1F);
  rate[26] = rate[27] = 0;
  CHECK_THROWS_AS(parse_wav(rate), DataError);
  CHECK_THROWS_AS(parse_wav(bytes.substr(0, bytes.size() - 4)), DataError);
  CHECK_THROWS_AS(parse_wav("RIFX" + bytes.substr(4)), DataError);
  CHECK(supported_rate(48000));
  CHECK_FALSE(supported_rate(8000));
}

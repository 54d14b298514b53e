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

#ifndef ISODUB_VAD_WAV_H_
#define ISODUB_VAD_WAV_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace isodub::vad {

struct PcmAudio {
  int rate_hz = 16000;
  std::vector<std::int16_t> samples;  // mono

  double duration_ms() const { return 1000.0 * static_cast<double>(samples.size()) / rate_hz; }
};

bool supported_rate(int rate_hz);

// RIFF/WAVE, PCM 16-bit mono at a supported rate; anything else is a
// DataError naming the offending field.
PcmAudio parse_wav(std::string_view bytes);
PcmAudio read_wav(const std::filesystem::path& path);
std::string encode_wav(const PcmAudio& audio);
void write_wav(const std::filesystem::path& path, const PcmAudio& audio);

}  // namespace isodub::vad

#endif  // ISODUB_VAD_WAV_H_

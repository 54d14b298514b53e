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

#include "isodub/vad/wav.h"

#include <cstring>

#include "isodub/common/error.h"
#include "isodub/common/io.h"

namespace isodub::vad {

namespace {

std::uint32_t le32(std::string_view b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[at + i]);
  return v;
}

std::uint16_t le16(std::string_view b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) | (static_cast<unsigned char>(b[at + 1]) << 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

}  // namespace

bool supported_rate(int rate_hz) {
  return rate_hz == 16000 || rate_hz == 22050 || rate_hz == 44100 || rate_hz == 48000;
}

PcmAudio parse_wav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE")
    throw DataError("wav: not a RIFF/WAVE file");
  bool have_fmt = false;
  PcmAudio audio;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string_view id = bytes.substr(pos, 4);
    const std::uint32_t size = le32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw DataError("wav: chunk '" + std::string(id) + "' runs past end of file");
    if (id == "fmt ") {
      if (size < 16) throw DataError("wav: fmt chunk too short");
      std::uint16_t format = le16(bytes, body);
      const std::uint16_t channels = le16(bytes, body + 2);
      const std::uint32_t rate = le32(bytes, body + 4);
      const std::uint16_t bits = le16(bytes, body + 14);
      if (format == 0xFFFE && size >= 26) format = le16(bytes, body + 24);  // extensible: sub-format GUID
      if (format != 1) throw DataError("wav: unsupported format " + std::to_string(format) + " (need PCM)");
      if (channels != 1) throw DataError("wav: " + std::to_string(channels) + " channels (need mono)");
      if (bits != 16) throw DataError("wav: " + std::to_string(bits) + "-bit samples (need 16-bit)");
      if (!supported_rate(static_cast<int>(rate)))
        throw DataError("wav: unsupported sample rate " + std::to_string(rate));
      audio.rate_hz = static_cast<int>(rate);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw DataError("wav: data chunk before fmt chunk");
      audio.samples.resize(size / 2);
      for (std::size_t i = 0; i < audio.samples.size(); ++i)
        audio.samples[i] = static_cast<std::int16_t>(le16(bytes, body + 2 * i));
      return audio;
    }
    pos = body + size + (size & 1);
  }
  throw DataError(have_fmt ? "wav: no data chunk" : "wav: no fmt chunk");
}

PcmAudio read_wav(const std::filesystem::path& path) { return parse_wav(read_file(path)); }

std::string encode_wav(const PcmAudio& audio) {
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::string out = "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(audio.rate_hz));
  put32(out, static_cast<std::uint32_t>(audio.rate_hz) * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, data_bytes);
  for (const std::int16_t s : audio.samples) put16(out, static_cast<std::uint16_t>(s));
  return out;
}

void write_wav(const std::filesystem::path& path, const PcmAudio& audio) { write_file(path, encode_wav(audio)); }

}  // namespace isodub::vad

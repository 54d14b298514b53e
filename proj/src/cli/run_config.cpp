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

#include "isodub/cli/run_config.h"

#include <charconv>
#include <stdexcept>

#include "isodub/common/error.h"
#include "isodub/common/io.h"

namespace isodub::cli {

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw UsageError("config key '" + std::string(key) + "': cannot parse '" + std::string(value) + "'");
  return out;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, v);
  } else if (key == "mode") {
    mode = model::parse_mode(v);
  } else if (key == "bins") {
    bins = parse_number<int>(key, v);
  } else if (key == "frame_ms") {
    frame_ms = parse_number<int>(key, v);
  } else if (key == "pause_ms") {
    pause_ms = parse_number<std::int64_t>(key, v);
  } else if (key == "bpe_vocab") {
    bpe_vocab = parse_number<int>(key, v);
  } else if (key == "max_duration") {
    max_duration = parse_number<int>(key, v);
  } else if (key == "max_malformed") {
    max_malformed = parse_number<double>(key, v);
  } else if (key == "val_samples") {
    val_samples = parse_number<int>(key, v);
  } else if (key == "system") {
    system = v;
  } else if (key == "preset") {
    const std::uint64_t keep_seed = model.seed;
    if (v == "desk")
      model = model::ModelConfig::desk();
    else if (v == "paper")
      model = model::ModelConfig::paper();
    else
      throw UsageError("preset must be 'desk' or 'paper'");
    model.seed = keep_seed;
  } else if (key == "sigma" || key == "noise.sigma") {
    noise.sigma = parse_number<double>(key, v);
  } else if (key == "oversample" || key == "noise.oversample") {
    noise.oversample = parse_number<int>(key, v);
  } else if (key == "noise_mode" || key == "noise.mode") {
    try {
      noise.mode = noise::parse_mode(v);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else if (key.starts_with("model.")) {
    const std::string field(key.substr(6));
    nlohmann::json j = model.to_json();
    if (!j.contains(field) || field == "seed") throw UsageError("unknown config key '" + std::string(key) + "'");
    auto& slot = j[field];
    if (slot.is_number_unsigned())
      slot = parse_number<std::uint64_t>(key, v);
    else if (slot.is_number_integer())
      slot = parse_number<int>(key, v);
    else
      slot = parse_number<double>(key, v);
    model = model::ModelConfig::from_json(j);
  } else if (key == "vad.frame_ms") {
    vad.frame_ms = parse_number<int>(key, v);
  } else if (key == "vad.threshold_db") {
    vad.threshold_db = parse_number<double>(key, v);
  } else if (key == "vad.min_pause_ms") {
    vad.min_pause_ms = parse_number<int>(key, v);
  } else if (key == "vad.min_speech_ms") {
    vad.min_speech_ms = parse_number<int>(key, v);
  } else {
    throw UsageError("unknown config key '" + std::string(key) + "'");
  }
}

void RunConfig::apply_file_text(std::string_view text) {
  std::size_t line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void RunConfig::apply_file(const std::filesystem::path& path) {
  try {
    apply_file_text(read_file(path));
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

void RunConfig::finalize() {
  model.seed = seed;
  noise.seed = seed;
  model.validate();
  try {
    noise::validate(noise);
    vad.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (bins < 2) throw UsageError("bins must be at least 2");
  if (frame_ms <= 0 || pause_ms <= 0) throw UsageError("frame_ms and pause_ms must be positive");
  if (bpe_vocab <= 0 || max_duration <= 0) throw UsageError("bpe_vocab and max_duration must be positive");
  if (!(max_malformed >= 0.0 && max_malformed <= 1.0)) throw UsageError("max_malformed must be in [0, 1]");
  if (val_samples < 0) throw UsageError("val_samples must be non-negative");
}

nlohmann::json RunConfig::to_json() const {
  return {{"seed", seed},
          {"mode", model::mode_name(mode)},
          {"model", model.to_json()},
          {"noise",
           {{"sigma", noise.sigma}, {"oversample", noise.oversample}, {"mode", noise::mode_name(noise.mode)},
            {"min_ms", noise.min_ms}}},
          {"vad", vad.to_json()},
          {"bins", bins},
          {"frame_ms", frame_ms},
          {"pause_ms", pause_ms},
          {"bpe_vocab", bpe_vocab},
          {"max_duration", max_duration},
          {"max_malformed", max_malformed},
          {"val_samples", val_samples},
          {"system", system}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    c.seed = j.at("seed").get<std::uint64_t>();
    c.mode = model::parse_mode(j.at("mode").get<std::string>());
    c.model = model::ModelConfig::from_json(j.at("model"));
    const auto& n = j.at("noise");
    c.noise.sigma = n.at("sigma").get<double>();
    c.noise.oversample = n.at("oversample").get<int>();
    c.noise.mode = noise::parse_mode(n.at("mode").get<std::string>());
    c.noise.min_ms = n.at("min_ms").get<std::int64_t>();
    const auto& v = j.at("vad");
    c.vad.frame_ms = v.at("frame_ms").get<int>();
    c.vad.threshold_db = v.at("threshold_db").get<double>();
    c.vad.min_pause_ms = v.at("min_pause_ms").get<int>();
    c.vad.min_speech_ms = v.at("min_speech_ms").get<int>();
    c.bins = j.at("bins").get<int>();
    c.frame_ms = j.at("frame_ms").get<int>();
    c.pause_ms = j.at("pause_ms").get<std::int64_t>();
    c.bpe_vocab = j.at("bpe_vocab").get<int>();
    c.max_duration = j.at("max_duration").get<int>();
    c.max_malformed = j.at("max_malformed").get<double>();
    c.val_samples = j.at("val_samples").get<int>();
    c.system = j.at("system").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("run config: ") + e.what());
  }
  c.finalize();
  return c;
}

}  // namespace isodub::cli

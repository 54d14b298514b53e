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

#ifndef ISODUB_CLI_RUN_CONFIG_H_
#define ISODUB_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "isodub/model/config.h"
#include "isodub/noise/noise.h"
#include "isodub/vad/vad.h"
#include "json.hpp"

namespace isodub::cli {

// Everything that influences an output artifact. Paths are deliberately
// absent so that two runs in different directories serialize identically.
struct RunConfig {
  std::uint64_t seed = 1;
  model::TrainingMode mode = model::TrainingMode::kTxtD2PhnD;
  model::ModelConfig model;
  noise::NoiseSpec noise;
  vad::VadConfig vad;
  int bins = 100;
  int frame_ms = 10;
  std::int64_t pause_ms = 300;
  int bpe_vocab = 800;
  int max_duration = 128;
  double max_malformed = 0.01;  // fraction of alignment lines
  int val_samples = 200;         // dev sentences decoded per epoch, 0 = all
  std::string system;            // label in reports; defaults to the mode

  // Keys: seed, mode, bins, frame_ms, pause_ms, bpe_vocab, max_duration,
  // max_malformed, val_samples, system, preset (desk|paper), sigma,
  // oversample, noise_mode, model.<field>, vad.<field>. Throws UsageError.
  void set(std::string_view key, std::string_view value);
  // "key = value" lines; '#' starts a comment.
  void apply_file_text(std::string_view text);
  void apply_file(const std::filesystem::path& path);
  // Pushes the root seed into the component configs and validates.
  void finalize();

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

}  // namespace isodub::cli

#endif  // ISODUB_CLI_RUN_CONFIG_H_

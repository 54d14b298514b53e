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

#ifndef ISODUB_MODEL_CONFIG_H_
#define ISODUB_MODEL_CONFIG_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

namespace isodub::model {

enum class TrainingMode {
  kStdMT,      // text -> text
  kTxt2Phn,    // text -> phonemes + durations
  kTxtD2PhnD,  // text + duration bins -> phonemes + durations
};

TrainingMode parse_mode(std::string_view name);
std::string_view mode_name(TrainingMode mode);
bool mode_uses_bins(TrainingMode mode);
bool mode_emits_phones(TrainingMode mode);
// TxtD2PhnD sources carry DELIM + bin tokens, the other modes must not.
// Throws DataError on a violation.
void check_source_contract(std::span<const int> src, TrainingMode mode, int delim_id);

struct ModelConfig {
  int enc_layers = 2;
  int dec_layers = 2;
  int d_model = 64;
  int heads = 4;
  int d_ffn = 256;
  double dropout = 0.1;
  double label_smoothing = 0.1;

  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double adam_eps = 1e-8;
  int warmup_steps = 0;
  double clip_norm = 0.0;  // 0 disables clipping
  int max_epochs = 50;
  int batch_size = 32;

  int beam = 5;
  int max_len = 256;
  double length_penalty = 1.0;

  std::uint64_t seed = 1;

  // 2 layers, d_model 64, 4 heads, FFN 256.
  static ModelConfig desk();
  // 6 layers, d_model 512, 8 heads, FFN 2048, dropout 0.3, lr 5e-4,
  // 200 epochs, beam 5.
  static ModelConfig paper();

  // Throws UsageError.
  void validate() const;
  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
};

}  // namespace isodub::model

#endif  // ISODUB_MODEL_CONFIG_H_

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

#include "isodub/model/config.h"

#include <algorithm>
#include <cctype>

#include "isodub/common/error.h"

namespace isodub::model {

TrainingMode parse_mode(std::string_view name) {
  std::string n(name);
  for (auto& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n == "stdmt") return TrainingMode::kStdMT;
  if (n == "txt2phn") return TrainingMode::kTxt2Phn;
  if (n == "txtd2phnd") return TrainingMode::kTxtD2PhnD;
  throw UsageError("unknown mode '" + std::string(name) + "' (expected StdMT, Txt2Phn or TxtD2PhnD)");
}

std::string_view mode_name(TrainingMode mode) {
  switch (mode) {
    case TrainingMode::kStdMT: return "StdMT";
    case TrainingMode::kTxt2Phn: return "Txt2Phn";
    case TrainingMode::kTxtD2PhnD: return "TxtD2PhnD";
  }
  return "?";
}

bool mode_uses_bins(TrainingMode mode) { return mode == TrainingMode::kTxtD2PhnD; }
bool mode_emits_phones(TrainingMode mode) { return mode != TrainingMode::kStdMT; }

void check_source_contract(std::span<const int> src, TrainingMode mode, int delim_id) {
  const bool has_delim = std::find(src.begin(), src.end(), delim_id) != src.end();
  if (mode_uses_bins(mode) && !has_delim)
    throw DataError(std::string(mode_name(mode)) + " source is missing the duration block");
  if (!mode_uses_bins(mode) && has_delim)
    throw DataError(std::string(mode_name(mode)) + " source must not carry duration bins");
}

ModelConfig ModelConfig::desk() { return ModelConfig{}; }

ModelConfig ModelConfig::paper() {
  ModelConfig c;
  c.enc_layers = 6;
  c.dec_layers = 6;
  c.d_model = 512;
  c.heads = 8;
  c.d_ffn = 2048;
  c.dropout = 0.3;
  c.lr = 5e-4;
  c.max_epochs = 200;
  c.beam = 5;
  return c;
}

void ModelConfig::validate() const {
  auto fail = [](const std::string& m) { throw UsageError("model config: " + m); };
  if (enc_layers < 0 || dec_layers < 0) fail("layer counts must be non-negative");
  if (d_model <= 0 || heads <= 0 || d_ffn <= 0) fail("d_model, heads and d_ffn must be positive");
  if (d_model % heads != 0) fail("d_model must be divisible by heads");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout must be in [0, 1)");
  if (!(label_smoothing >= 0.0 && label_smoothing < 1.0)) fail("label_smoothing must be in [0, 1)");
  if (!(lr > 0.0)) fail("lr must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) fail("adam betas must be in [0, 1)");
  if (!(adam_eps > 0.0)) fail("adam eps must be positive");
  if (max_epochs < 0 || batch_size <= 0) fail("max_epochs >= 0 and batch_size > 0 required");
  if (beam < 1 || max_len < 1) fail("beam and max_len must be at least 1");
  if (warmup_steps < 0 || clip_norm < 0.0) fail("warmup_steps and clip_norm must be non-negative");
}

nlohmann::json ModelConfig::to_json() const {
  return {{"enc_layers", enc_layers}, {"dec_layers", dec_layers}, {"d_model", d_model},
          {"heads", heads},           {"d_ffn", d_ffn},           {"dropout", dropout},
          {"label_smoothing", label_smoothing},
          {"lr", lr},                 {"beta1", beta1},           {"beta2", beta2},
          {"adam_eps", adam_eps},     {"warmup_steps", warmup_steps},
          {"clip_norm", clip_norm},   {"max_epochs", max_epochs}, {"batch_size", batch_size},
          {"beam", beam},             {"max_len", max_len},       {"length_penalty", length_penalty},
          {"seed", seed}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  get("enc_layers", c.enc_layers);
  get("dec_layers", c.dec_layers);
  get("d_model", c.d_model);
  get("heads", c.heads);
  get("d_ffn", c.d_ffn);
  get("dropout", c.dropout);
  get("label_smoothing", c.label_smoothing);
  get("lr", c.lr);
  get("beta1", c.beta1);
  get("beta2", c.beta2);
  get("adam_eps", c.adam_eps);
  get("warmup_steps", c.warmup_steps);
  get("clip_norm", c.clip_norm);
  get("max_epochs", c.max_epochs);
  get("batch_size", c.batch_size);
  get("beam", c.beam);
  get("max_len", c.max_len);
  get("length_penalty", c.length_penalty);
  get("seed", c.seed);
  c.validate();
  return c;
}

}  // namespace isodub::model

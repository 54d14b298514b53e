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

#ifndef ISODUB_MODEL_CHECKPOINT_H_
#define ISODUB_MODEL_CHECKPOINT_H_

// Checkpoint file layout (little endian):
//
//   "ISODUBCK"            8-byte magic
//   u32 version           currently 1
//   u64 header_bytes
//   header JSON           config, mode, fingerprints, epoch, metrics and a
//                         tensor table {name, group, shape, offset}
//   float32 data          tensors back to back, offsets in floats
//
// Groups: "param" (model weights), "adam_m", "adam_v" (optional optimizer
// state for resuming).

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "isodub/model/adam.h"
#include "isodub/model/config.h"
#include "isodub/model/transformer.h"
#include "json.hpp"

namespace isodub::model {

struct NamedTensor {
  std::string name;
  std::string group = "param";
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<float> data;
};

struct Checkpoint {
  ModelConfig config;
  TrainingMode mode = TrainingMode::kTxtD2PhnD;
  int src_vocab_size = 0;
  int tgt_vocab_size = 0;
  std::string src_vocab_hash;
  std::string tgt_vocab_hash;
  std::string bins_hash;  // empty when the mode takes no bins
  int epoch = 0;
  std::int64_t optimizer_steps = 0;
  nlohmann::json metrics = nlohmann::json::object();
  nlohmann::json extra = nlohmann::json::object();  // provenance, training state
  std::vector<NamedTensor> tensors;

  void capture_params(const Transformer<float>& model);
  void capture_optimizer(Adam<float>& adam, const Transformer<float>& model);
  // Throws DataError on any name or shape mismatch.
  void restore_params(Transformer<float>& model) const;
  bool has_optimizer() const;
  void restore_optimizer(Adam<float>& adam, const Transformer<float>& model) const;

  std::unique_ptr<Transformer<float>> build_model() const;

  std::string serialize() const;
  static Checkpoint parse(const std::string& bytes);
  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

  // Refuses (DataError) when the given fingerprints differ from the stored
  // ones. An empty bins argument skips the bin check.
  void verify(const std::string& src_vocab_hash, const std::string& tgt_vocab_hash,
              const std::string& bins_hash) const;
};

}  // namespace isodub::model

#endif  // ISODUB_MODEL_CHECKPOINT_H_

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

#ifndef ISODUB_MODEL_TRAINER_H_
#define ISODUB_MODEL_TRAINER_H_

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "isodub/common/error.h"
#include "isodub/model/adam.h"
#include "isodub/model/config.h"
#include "isodub/model/transformer.h"
#include "json.hpp"

namespace isodub::model {

class TrainingDiverged : public DataError {
 public:
  using DataError::DataError;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;  // label-smoothed objective
  double val_loss = 0.0;    // plain cross-entropy
  double val_bleu = 0.0;
  std::optional<double> val_so;
  bool best = false;

  nlohmann::json to_json() const;
  static EpochLog from_json(const nlohmann::json& j);
};

struct ValidationScores {
  double bleu = 0.0;
  std::optional<double> so;
};

using Validator = std::function<ValidationScores(const Transformer<float>&)>;

// Adam training with per-epoch validation. Batches are drawn from a
// shuffle keyed on (seed, epoch) and dropout masks from (seed, step), so a
// run resumed from a saved epoch reproduces the uninterrupted run.
class Trainer {
 public:
  struct Best {
    int epoch = 0;
    double bleu = -std::numeric_limits<double>::infinity();
    double val_loss = std::numeric_limits<double>::infinity();
    std::vector<Matrix<float>> params;
  };

  using EpochCallback = std::function<void(const EpochLog&, Trainer&)>;

  Trainer(const ModelConfig& config, int src_vocab, int tgt_vocab);

  double train_epoch(std::span<const SequencePair> data, int epoch);
  double evaluate_loss(std::span<const SequencePair> data, std::size_t batch_size = 64) const;

  // Epochs completed_epochs()+1 .. config.max_epochs. Without a validator
  // the best checkpoint is the one with the lowest validation loss.
  std::vector<EpochLog> fit(std::span<const SequencePair> train, std::span<const SequencePair> dev,
                            const Validator& validator, const EpochCallback& on_epoch = {});

  // Higher BLEU wins; equal BLEU falls back to lower validation loss.
  static bool improves(double bleu, double val_loss, const Best& best);

  Transformer<float>& model() { return model_; }
  const Transformer<float>& model() const { return model_; }
  Adam<float>& optimizer() { return adam_; }
  const ModelConfig& config() const { return config_; }
  int completed_epochs() const { return epoch_; }
  void set_completed_epochs(int epoch) { epoch_ = epoch; }
  Best& best() { return best_; }
  const Best& best() const { return best_; }

 private:
  ModelConfig config_;
  Transformer<float> model_;
  Adam<float> adam_;
  int epoch_ = 0;
  Best best_;
};

}  // namespace isodub::model

#endif  // ISODUB_MODEL_TRAINER_H_

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

#include "isodub/model/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "isodub/common/rng.h"
#include "isodub/model/loss.h"

namespace isodub::model {

nlohmann::json EpochLog::to_json() const {
  nlohmann::json j = {{"epoch", epoch}, {"train_loss", train_loss}, {"val_loss", val_loss}, {"val_bleu", val_bleu}};
  j["val_so"] = val_so ? nlohmann::json(*val_so) : nlohmann::json(nullptr);
  return j;
}

EpochLog EpochLog::from_json(const nlohmann::json& j) {
  EpochLog e;
  e.epoch = j.at("epoch").get<int>();
  e.train_loss = j.at("train_loss").get<double>();
  e.val_loss = j.at("val_loss").get<double>();
  e.val_bleu = j.at("val_bleu").get<double>();
  if (!j.at("val_so").is_null()) e.val_so = j.at("val_so").get<double>();
  return e;
}

Trainer::Trainer(const ModelConfig& config, int src_vocab, int tgt_vocab)
    : config_(config),
      model_(config, src_vocab, tgt_vocab),
      adam_(model_.params(), AdamConfig{config.beta1, config.beta2, config.adam_eps}) {}

double Trainer::train_epoch(std::span<const SequencePair> data, int epoch) {
  if (data.empty()) throw DataError("training set is empty");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  auto shuffle_rng = substream(config_.seed, "shuffle", {static_cast<std::uint64_t>(epoch)});
  std::shuffle(order.begin(), order.end(), shuffle_rng);

  const std::size_t bs = static_cast<std::size_t>(config_.batch_size);
  double loss_sum = 0.0;
  std::size_t token_sum = 0;
  std::vector<const SequencePair*> chunk;
  for (std::size_t start = 0; start < order.size(); start += bs) {
    chunk.clear();
    for (std::size_t i = start; i < std::min(order.size(), start + bs); ++i) chunk.push_back(&data[order[i]]);
    const PackedBatch batch = PackedBatch::pack(std::span<const SequencePair* const>(chunk));

    const std::uint64_t step = static_cast<std::uint64_t>(adam_.steps()) + 1;
    auto dropout_rng = substream(config_.seed, "dropout", {step});
    Transformer<float>::ForwardState state;
    model_.params().zero_grad();
    const Matrix<float> logits = model_.forward(batch, &state, &dropout_rng);
    const auto loss = cross_entropy(logits, batch.tgt_out, kPadId, config_.label_smoothing);
    if (!std::isfinite(loss.loss))
      throw TrainingDiverged("non-finite training loss at epoch " + std::to_string(epoch) + ", step " +
                             std::to_string(step) + " (lr " + std::to_string(config_.lr) + ")");
    model_.backward(state, loss.dlogits);
    if (config_.clip_norm > 0.0) clip_grad_norm(model_.params(), config_.clip_norm);
    double lr = config_.lr;
    if (config_.warmup_steps > 0)
      lr *= std::min(1.0, static_cast<double>(step) / static_cast<double>(config_.warmup_steps));
    adam_.step(lr);
    loss_sum += loss.loss * static_cast<double>(loss.tokens);
    token_sum += loss.tokens;
  }
  return loss_sum / static_cast<double>(std::max<std::size_t>(1, token_sum));
}

double Trainer::evaluate_loss(std::span<const SequencePair> data, std::size_t batch_size) const {
  double loss_sum = 0.0;
  std::size_t token_sum = 0;
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    const auto chunk = data.subspan(start, std::min(batch_size, data.size() - start));
    const PackedBatch batch = PackedBatch::pack(chunk);
    const Matrix<float> logits = model_.forward(batch, nullptr, nullptr);
    const auto loss = cross_entropy(logits, batch.tgt_out, kPadId, 0.0, false);
    loss_sum += loss.loss * static_cast<double>(loss.tokens);
    token_sum += loss.tokens;
  }
  return token_sum ? loss_sum / static_cast<double>(token_sum) : 0.0;
}

bool Trainer::improves(double bleu, double val_loss, const Best& best) {
  if (bleu > best.bleu) return true;
  return bleu == best.bleu && val_loss < best.val_loss;
}

std::vector<EpochLog> Trainer::fit(std::span<const SequencePair> train, std::span<const SequencePair> dev,
                                   const Validator& validator, const EpochCallback& on_epoch) {
  std::vector<EpochLog> logs;
  for (int epoch = epoch_ + 1; epoch <= config_.max_epochs; ++epoch) {
    EpochLog log;
    log.epoch = epoch;
    log.train_loss = train_epoch(train, epoch);
    log.val_loss = dev.empty() ? log.train_loss : evaluate_loss(dev);
    if (validator) {
      const auto scores = validator(model_);
      log.val_bleu = scores.bleu;
      log.val_so = scores.so;
    }
    const double bleu_key = validator ? log.val_bleu : 0.0;
    if (improves(bleu_key, log.val_loss, best_)) {
      best_.epoch = epoch;
      best_.bleu = bleu_key;
      best_.val_loss = log.val_loss;
      best_.params = model_.snapshot();
      log.best = true;
    }
    epoch_ = epoch;
    logs.push_back(log);
    if (on_epoch) on_epoch(log, *this);
  }
  return logs;
}

}  // namespace isodub::model

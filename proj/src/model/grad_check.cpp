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

#include "isodub/model/grad_check.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "isodub/common/rng.h"
#include "isodub/model/loss.h"

namespace isodub::model {

namespace {

std::optional<std::mt19937_64> dropout_rng(const GradCheckOptions& options) {
  if (!options.dropout_seed) return std::nullopt;
  return substream(*options.dropout_seed, "gradcheck-dropout");
}

}  // namespace

double batch_loss(const Transformer<double>& model, const PackedBatch& batch, const GradCheckOptions& options) {
  auto rng = dropout_rng(options);
  const Matrix<double> logits = model.forward(batch, nullptr, rng ? &*rng : nullptr);
  return cross_entropy(logits, batch.tgt_out, kPadId, options.label_smoothing, false).loss;
}

GradCheckReport check_gradients(Transformer<double>& model, const PackedBatch& batch,
                                const GradCheckOptions& options) {
  auto& params = model.params();
  params.zero_grad();
  {
    auto rng = dropout_rng(options);
    Transformer<double>::ForwardState state;
    const Matrix<double> logits = model.forward(batch, &state, rng ? &*rng : nullptr);
    const auto loss = cross_entropy(logits, batch.tgt_out, kPadId, options.label_smoothing);
    model.backward(state, loss.dlogits);
  }

  GradCheckReport report;
  auto pick = substream(options.seed, "gradcheck-coords");
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto& param = params[p];
    const Eigen::Index n = param.value.size();
    std::vector<Eigen::Index> coords;
    if (n <= options.coords_per_param) {
      for (Eigen::Index i = 0; i < n; ++i) coords.push_back(i);
    } else {
      std::uniform_int_distribution<Eigen::Index> dist(0, n - 1);
      for (int i = 0; i < options.coords_per_param; ++i) coords.push_back(dist(pick));
    }
    for (const Eigen::Index idx : coords) {
      double& w = param.value.data()[idx];
      const double saved = w;
      w = saved + options.step;
      const double up = batch_loss(model, batch, options);
      w = saved - options.step;
      const double down = batch_loss(model, batch, options);
      w = saved;
      GradCheckEntry e;
      e.param = param.name;
      e.index = idx;
      e.analytic = param.grad.data()[idx];
      e.numeric = (up - down) / (2.0 * options.step);
      e.rel_error = std::abs(e.analytic - e.numeric) /
                    std::max(std::abs(e.analytic) + std::abs(e.numeric), options.floor);
      if (e.rel_error > report.max_rel_error) {
        report.max_rel_error = e.rel_error;
        report.worst_param = e.param;
      }
      report.entries.push_back(std::move(e));
    }
  }
  return report;
}

}  // namespace isodub::model

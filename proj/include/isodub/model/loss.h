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

#ifndef ISODUB_MODEL_LOSS_H_
#define ISODUB_MODEL_LOSS_H_

#include <span>
#include <vector>

#include "isodub/model/layers.h"

namespace isodub::model {

template <typename T>
struct LossOutput {
  double loss = 0.0;        // mean over non-PAD positions
  std::size_t tokens = 0;   // non-PAD positions
  Matrix<T> dlogits;        // d(loss)/d(logits); zero rows at PAD
};

// Token-level cross-entropy against a smoothed target: (1 - eps) on the
// gold token plus eps/V spread over the vocabulary. Every non-PAD position
// weighs the same regardless of token class.
template <typename T>
LossOutput<T> cross_entropy(const Matrix<T>& logits, std::span<const int> targets, int pad_id,
                            double label_smoothing, bool want_grad = true);

// Unreduced per-row losses (0 at PAD rows).
template <typename T>
std::vector<double> token_losses(const Matrix<T>& logits, std::span<const int> targets, int pad_id,
                                 double label_smoothing);

}  // namespace isodub::model

#endif  // ISODUB_MODEL_LOSS_H_

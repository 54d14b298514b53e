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

#ifndef ISODUB_MODEL_GRAD_CHECK_H_
#define ISODUB_MODEL_GRAD_CHECK_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isodub/model/transformer.h"

namespace isodub::model {

struct GradCheckEntry {
  std::string param;
  Eigen::Index index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  std::string worst_param;
};

struct GradCheckOptions {
  int coords_per_param = 6;
  double step = 1e-4;
  // Denominator floor for the relative error. Some gradients are exactly
  // zero (key biases shift every score of a row equally), and there the
  // central difference only sees rounding noise of order 1e-11.
  double floor = 1e-6;
  double label_smoothing = 0.0;
  std::optional<std::uint64_t> dropout_seed;  // same masks for every evaluation
  std::uint64_t seed = 7;                     // picks the probed coordinates
};

// Central differences against backward() on a random subset of every
// parameter. rel = |a - n| / max(|a| + |n|, floor).
GradCheckReport check_gradients(Transformer<double>& model, const PackedBatch& batch,
                                const GradCheckOptions& options = {});

// Loss of the batch as seen by the gradient check.
double batch_loss(const Transformer<double>& model, const PackedBatch& batch, const GradCheckOptions& options);

}  // namespace isodub::model

#endif  // ISODUB_MODEL_GRAD_CHECK_H_

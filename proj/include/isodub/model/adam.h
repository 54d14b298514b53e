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

#ifndef ISODUB_MODEL_ADAM_H_
#define ISODUB_MODEL_ADAM_H_

#include <cstdint>
#include <vector>

#include "isodub/model/layers.h"

namespace isodub::model {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-8;
};

// Adam with bias correction. Moments are kept per parameter in the
// ParameterSet's order.
template <typename T>
class Adam {
 public:
  Adam(ParameterSet<T>& params, AdamConfig config);

  void step(double lr);

  std::int64_t steps() const { return steps_; }
  std::vector<Matrix<T>>& first_moments() { return m_; }
  std::vector<Matrix<T>>& second_moments() { return v_; }
  void set_steps(std::int64_t steps) { steps_ = steps; }

 private:
  ParameterSet<T>& params_;
  AdamConfig config_;
  std::int64_t steps_ = 0;
  std::vector<Matrix<T>> m_, v_;
};

// Scales all gradients so their global L2 norm is at most max_norm.
// Returns the norm before scaling.
template <typename T>
double clip_grad_norm(ParameterSet<T>& params, double max_norm);

}  // namespace isodub::model

#endif  // ISODUB_MODEL_ADAM_H_

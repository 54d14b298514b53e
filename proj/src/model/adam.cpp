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

#include "isodub/model/adam.h"

#include <cmath>

namespace isodub::model {

template <typename T>
Adam<T>::Adam(ParameterSet<T>& params, AdamConfig config) : params_(params), config_(config) {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    m_.push_back(Matrix<T>::Zero(params_[i].value.rows(), params_[i].value.cols()));
    v_.push_back(Matrix<T>::Zero(params_[i].value.rows(), params_[i].value.cols()));
  }
}

template <typename T>
void Adam<T>::step(double lr) {
  ++steps_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  const T step_size = static_cast<T>(lr / c1);
  const T inv_c2 = static_cast<T>(1.0 / c2);
  const T eps = static_cast<T>(config_.eps);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i];
    m_[i] = static_cast<T>(b1) * m_[i] + static_cast<T>(1.0 - b1) * p.grad;
    v_[i].array() = static_cast<T>(b2) * v_[i].array() + static_cast<T>(1.0 - b2) * p.grad.array().square();
    p.value.array() -= step_size * m_[i].array() / ((v_[i].array() * inv_c2).sqrt() + eps);
  }
}

template <typename T>
double clip_grad_norm(ParameterSet<T>& params, double max_norm) {
  double sq = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) sq += static_cast<double>(params[i].grad.squaredNorm());
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const T scale = static_cast<T>(max_norm / (norm + 1e-12));
    for (std::size_t i = 0; i < params.size(); ++i) params[i].grad *= scale;
  }
  return norm;
}

template class Adam<float>;
template class Adam<double>;
template double clip_grad_norm<float>(ParameterSet<float>&, double);
template double clip_grad_norm<double>(ParameterSet<double>&, double);

}  // namespace isodub::model

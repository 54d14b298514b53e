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

#include "isodub/model/loss.h"

#include <cmath>
#include <stdexcept>

namespace isodub::model {

namespace {

template <typename T>
double row_loss(const Matrix<T>& logits, Eigen::Index r, int target, double eps, double* lse_out) {
  const Eigen::Index v = logits.cols();
  const double mx = static_cast<double>(logits.row(r).maxCoeff());
  double sum = 0.0, sum_logits = 0.0;
  for (Eigen::Index j = 0; j < v; ++j) {
    const double x = static_cast<double>(logits(r, j));
    sum += std::exp(x - mx);
    sum_logits += x;
  }
  const double lse = mx + std::log(sum);
  *lse_out = lse;
  const double nll = lse - static_cast<double>(logits(r, target));
  const double smooth = lse - sum_logits / static_cast<double>(v);
  return (1.0 - eps) * nll + eps * smooth;
}

}  // namespace

template <typename T>
LossOutput<T> cross_entropy(const Matrix<T>& logits, std::span<const int> targets, int pad_id, double eps,
                            bool want_grad) {
  if (static_cast<std::size_t>(logits.rows()) != targets.size())
    throw std::invalid_argument("cross_entropy: logits rows and targets differ");
  LossOutput<T> out;
  for (int t : targets)
    if (t != pad_id) ++out.tokens;
  if (want_grad) out.dlogits = Matrix<T>::Zero(logits.rows(), logits.cols());
  if (out.tokens == 0) return out;
  const double inv_n = 1.0 / static_cast<double>(out.tokens);
  const double uniform = eps / static_cast<double>(logits.cols());
  double total = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const int t = targets[static_cast<std::size_t>(r)];
    if (t == pad_id) continue;
    if (t < 0 || t >= logits.cols()) throw std::out_of_range("cross_entropy: target id out of range");
    double lse = 0.0;
    total += row_loss(logits, r, t, eps, &lse);
    if (want_grad) {
      for (Eigen::Index j = 0; j < logits.cols(); ++j) {
        const double p = std::exp(static_cast<double>(logits(r, j)) - lse);
        const double q = uniform + (j == t ? 1.0 - eps : 0.0);
        out.dlogits(r, j) = static_cast<T>((p - q) * inv_n);
      }
    }
  }
  out.loss = total * inv_n;
  return out;
}

template <typename T>
std::vector<double> token_losses(const Matrix<T>& logits, std::span<const int> targets, int pad_id, double eps) {
  std::vector<double> out(targets.size(), 0.0);
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const int t = targets[static_cast<std::size_t>(r)];
    if (t == pad_id) continue;
    double lse = 0.0;
    out[static_cast<std::size_t>(r)] = row_loss(logits, r, t, eps, &lse);
  }
  return out;
}

template LossOutput<float> cross_entropy<float>(const Matrix<float>&, std::span<const int>, int, double, bool);
template LossOutput<double> cross_entropy<double>(const Matrix<double>&, std::span<const int>, int, double, bool);
template std::vector<double> token_losses<float>(const Matrix<float>&, std::span<const int>, int, double);
template std::vector<double> token_losses<double>(const Matrix<double>&, std::span<const int>, int, double);

}  // namespace isodub::model

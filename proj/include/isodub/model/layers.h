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

#ifndef ISODUB_MODEL_LAYERS_H_
#define ISODUB_MODEL_LAYERS_H_

// Building blocks with hand-written backward passes. Activations for a
// batch are packed row-wise: sequence b occupies rows
// [offset[b], offset[b] + length[b]) of every activation matrix, so no
// padding ever enters a matmul or an attention window.

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace isodub::model {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using RowVector = Eigen::Matrix<T, 1, Eigen::Dynamic>;
template <typename T>
using ColVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <typename T>
struct Parameter {
  std::string name;
  Matrix<T> value;
  Matrix<T> grad;
};

template <typename T>
class ParameterSet {
 public:
  Parameter<T>& add(std::string name, Eigen::Index rows, Eigen::Index cols);
  Parameter<T>* find(const std::string& name);
  const Parameter<T>* find(const std::string& name) const;

  void zero_grad();
  std::size_t scalar_count() const;
  std::size_t size() const { return params_.size(); }
  Parameter<T>& operator[](std::size_t i) { return *params_[i]; }
  const Parameter<T>& operator[](std::size_t i) const { return *params_[i]; }

 private:
  std::vector<std::unique_ptr<Parameter<T>>> params_;
};

struct Layout {
  std::vector<Eigen::Index> offset;
  std::vector<Eigen::Index> length;
  Eigen::Index total = 0;

  static Layout from_lengths(const std::vector<Eigen::Index>& lengths);
  std::size_t size() const { return length.size(); }
};

// Inverted dropout. An empty mask means the layer was inactive.
template <typename T>
struct DropoutMask {
  Matrix<T> mask;
};

template <typename T>
void dropout_forward(Matrix<T>& x, double p, std::mt19937_64* rng, DropoutMask<T>* mask);
template <typename T>
void dropout_backward(Matrix<T>& dx, const DropoutMask<T>& mask);

template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(ParameterSet<T>& ps, const std::string& name, int in, int out);

  Matrix<T> forward(const Matrix<T>& x) const;
  // Accumulates weight gradients and returns dL/dx.
  Matrix<T> backward(const Matrix<T>& x, const Matrix<T>& dy) const;

  const Matrix<T>& weight() const { return w_->value; }

 private:
  Parameter<T>* w_ = nullptr;  // in x out
  Parameter<T>* b_ = nullptr;  // 1 x out
};

template <typename T>
class LayerNorm {
 public:
  struct Cache {
    Matrix<T> xhat;
    ColVector<T> rstd;
  };

  LayerNorm() = default;
  LayerNorm(ParameterSet<T>& ps, const std::string& name, int dim);

  Matrix<T> forward(const Matrix<T>& x, Cache* cache) const;
  Matrix<T> backward(const Matrix<T>& dy, const Cache& cache) const;

 private:
  Parameter<T>* gamma_ = nullptr;
  Parameter<T>* beta_ = nullptr;
  static constexpr double kEps = 1e-5;
};

template <typename T>
class FeedForward {
 public:
  struct Cache {
    Matrix<T> x;
    Matrix<T> hidden;  // post-ReLU
  };

  FeedForward() = default;
  FeedForward(ParameterSet<T>& ps, const std::string& name, int d_model, int d_ffn);

  Matrix<T> forward(const Matrix<T>& x, Cache* cache) const;
  Matrix<T> backward(const Matrix<T>& dy, const Cache& cache) const;

 private:
  Linear<T> in_, out_;
};

// Multi-head scaled dot-product attention over packed sequences.
template <typename T>
class MultiHeadAttention {
 public:
  struct Cache {
    Matrix<T> xq, xkv;
    Matrix<T> q, k, v, context;
    std::vector<Matrix<T>> probs;  // [seq * heads + head]
  };

  // Keys/values of one sequence for incremental decoding.
  struct KeyValue {
    Matrix<T> k, v;
  };

  MultiHeadAttention() = default;
  MultiHeadAttention(ParameterSet<T>& ps, const std::string& name, int d_model, int heads);

  // With causal=true, query row i of a sequence sees key rows 0..i.
  Matrix<T> forward(const Matrix<T>& xq, const Layout& lq, const Matrix<T>& xkv, const Layout& lk,
                    bool causal, Cache* cache) const;
  // Returns (dL/dxq, dL/dxkv).
  std::pair<Matrix<T>, Matrix<T>> backward(const Matrix<T>& dout, const Cache& cache, const Layout& lq,
                                           const Layout& lk) const;

  KeyValue project_kv(const Matrix<T>& xkv) const;
  // One query row against the given keys/values (no mask).
  RowVector<T> attend(const RowVector<T>& xq, const KeyValue& kv) const;
  // Appends this row's key/value to kv, then attends over all of kv.
  RowVector<T> attend_incremental(const RowVector<T>& x, KeyValue& kv) const;

 private:
  int heads_ = 1;
  int d_head_ = 1;
  Linear<T> wq_, wk_, wv_, wo_;
};

// Sinusoidal positional encodings, rows 0..length-1.
template <typename T>
Matrix<T> positional_encoding(Eigen::Index length, int d_model, Eigen::Index start = 0);

}  // namespace isodub::model

#endif  // ISODUB_MODEL_LAYERS_H_

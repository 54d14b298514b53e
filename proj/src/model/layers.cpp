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

#include "isodub/model/layers.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace isodub::model {

template <typename T>
Parameter<T>& ParameterSet<T>::add(std::string name, Eigen::Index rows, Eigen::Index cols) {
  for (const auto& p : params_)
    if (p->name == name) throw std::logic_error("duplicate parameter " + name);
  auto p = std::make_unique<Parameter<T>>();
  p->name = std::move(name);
  p->value = Matrix<T>::Zero(rows, cols);
  p->grad = Matrix<T>::Zero(rows, cols);
  params_.push_back(std::move(p));
  return *params_.back();
}

template <typename T>
Parameter<T>* ParameterSet<T>::find(const std::string& name) {
  for (auto& p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

template <typename T>
const Parameter<T>* ParameterSet<T>::find(const std::string& name) const {
  for (const auto& p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

template <typename T>
void ParameterSet<T>::zero_grad() {
  for (auto& p : params_) p->grad.setZero();
}

template <typename T>
std::size_t ParameterSet<T>::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
  return n;
}

Layout Layout::from_lengths(const std::vector<Eigen::Index>& lengths) {
  Layout l;
  l.length = lengths;
  l.offset.reserve(lengths.size());
  for (auto n : lengths) {
    l.offset.push_back(l.total);
    l.total += n;
  }
  return l;
}

template <typename T>
void dropout_forward(Matrix<T>& x, double p, std::mt19937_64* rng, DropoutMask<T>* mask) {
  if (p <= 0.0 || rng == nullptr) {
    if (mask) mask->mask.resize(0, 0);
    return;
  }
  const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
  const auto threshold = static_cast<std::uint64_t>(p * 9007199254740992.0);  // p * 2^53
  Matrix<T> m(x.rows(), x.cols());
  T* data = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i) data[i] = ((*rng)() >> 11) >= threshold ? keep_scale : T(0);
  x.array() *= m.array();
  if (mask) mask->mask = std::move(m);
}

template <typename T>
void dropout_backward(Matrix<T>& dx, const DropoutMask<T>& mask) {
  if (mask.mask.size() == 0) return;
  dx.array() *= mask.mask.array();
}

namespace {

template <typename T>
void softmax_rows(Matrix<T>& s) {
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    auto row = s.row(i);
    const T mx = row.maxCoeff();
    row = (row.array() - mx).exp();
    row /= row.sum();
  }
}

}  // namespace

// Parameters are created zero-initialized; Transformer fills them from its
// init stream so that construction order fixes the random layout.

template <typename T>
Linear<T>::Linear(ParameterSet<T>& ps, const std::string& name, int in, int out)
    : w_(&ps.add(name + ".weight", in, out)), b_(&ps.add(name + ".bias", 1, out)) {}

template <typename T>
Matrix<T> Linear<T>::forward(const Matrix<T>& x) const {
  Matrix<T> y(x.rows(), w_->value.cols());
  y.noalias() = x * w_->value;
  y.rowwise() += b_->value.row(0);
  return y;
}

template <typename T>
Matrix<T> Linear<T>::backward(const Matrix<T>& x, const Matrix<T>& dy) const {
  w_->grad.noalias() += x.transpose() * dy;
  b_->grad.row(0) += dy.colwise().sum();
  Matrix<T> dx(dy.rows(), w_->value.rows());
  dx.noalias() = dy * w_->value.transpose();
  return dx;
}

template <typename T>
LayerNorm<T>::LayerNorm(ParameterSet<T>& ps, const std::string& name, int dim)
    : gamma_(&ps.add(name + ".gamma", 1, dim)), beta_(&ps.add(name + ".beta", 1, dim)) {
  gamma_->value.setOnes();
}

template <typename T>
Matrix<T> LayerNorm<T>::forward(const Matrix<T>& x, Cache* cache) const {
  const Eigen::Index n = x.cols();
  Matrix<T> xhat(x.rows(), n);
  ColVector<T> rstd(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const T mean = x.row(i).mean();
    const T var = (x.row(i).array() - mean).square().mean();
    rstd(i) = T(1) / std::sqrt(var + static_cast<T>(kEps));
    xhat.row(i) = (x.row(i).array() - mean) * rstd(i);
  }
  Matrix<T> y = xhat;
  y.array().rowwise() *= gamma_->value.row(0).array();
  y.rowwise() += beta_->value.row(0);
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->rstd = std::move(rstd);
  }
  return y;
}

template <typename T>
Matrix<T> LayerNorm<T>::backward(const Matrix<T>& dy, const Cache& c) const {
  gamma_->grad.row(0) += (dy.array() * c.xhat.array()).colwise().sum().matrix();
  beta_->grad.row(0) += dy.colwise().sum();
  Matrix<T> dxhat = dy;
  dxhat.array().rowwise() *= gamma_->value.row(0).array();
  const T n = static_cast<T>(dy.cols());
  Matrix<T> dx(dy.rows(), dy.cols());
  for (Eigen::Index i = 0; i < dy.rows(); ++i) {
    const T sum_d = dxhat.row(i).sum();
    const T sum_dx = dxhat.row(i).dot(c.xhat.row(i));
    dx.row(i) = (c.rstd(i) / n) * (n * dxhat.row(i).array() - sum_d - c.xhat.row(i).array() * sum_dx).matrix();
  }
  return dx;
}

template <typename T>
FeedForward<T>::FeedForward(ParameterSet<T>& ps, const std::string& name, int d_model, int d_ffn)
    : in_(ps, name + ".fc1", d_model, d_ffn), out_(ps, name + ".fc2", d_ffn, d_model) {}

template <typename T>
Matrix<T> FeedForward<T>::forward(const Matrix<T>& x, Cache* cache) const {
  Matrix<T> h = in_.forward(x).cwiseMax(T(0));
  Matrix<T> y = out_.forward(h);
  if (cache) {
    cache->x = x;
    cache->hidden = std::move(h);
  }
  return y;
}

template <typename T>
Matrix<T> FeedForward<T>::backward(const Matrix<T>& dy, const Cache& c) const {
  Matrix<T> dh = out_.backward(c.hidden, dy);
  dh.array() *= (c.hidden.array() > T(0)).template cast<T>();
  return in_.backward(c.x, dh);
}

template <typename T>
MultiHeadAttention<T>::MultiHeadAttention(ParameterSet<T>& ps, const std::string& name, int d_model, int heads)
    : heads_(heads),
      d_head_(d_model / heads),
      wq_(ps, name + ".q", d_model, d_model),
      wk_(ps, name + ".k", d_model, d_model),
      wv_(ps, name + ".v", d_model, d_model),
      wo_(ps, name + ".out", d_model, d_model) {}

template <typename T>
Matrix<T> MultiHeadAttention<T>::forward(const Matrix<T>& xq, const Layout& lq, const Matrix<T>& xkv,
                                         const Layout& lk, bool causal, Cache* cache) const {
  Matrix<T> q = wq_.forward(xq);
  Matrix<T> k = wk_.forward(xkv);
  Matrix<T> v = wv_.forward(xkv);
  Matrix<T> context = Matrix<T>::Zero(xq.rows(), xq.cols());
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(d_head_)));
  std::vector<Matrix<T>> probs;
  if (cache) probs.reserve(lq.size() * static_cast<std::size_t>(heads_));

  for (std::size_t b = 0; b < lq.size(); ++b) {
    const Eigen::Index oq = lq.offset[b], nq = lq.length[b];
    const Eigen::Index ok = lk.offset[b], nk = lk.length[b];
    for (int h = 0; h < heads_; ++h) {
      const Eigen::Index col = static_cast<Eigen::Index>(h) * d_head_;
      Matrix<T> s(nq, nk);
      s.noalias() = q.block(oq, col, nq, d_head_) * k.block(ok, col, nk, d_head_).transpose();
      s *= scale;
      if (causal)
        for (Eigen::Index i = 0; i < nq; ++i)
          for (Eigen::Index j = i + 1; j < nk; ++j) s(i, j) = -std::numeric_limits<T>::infinity();
      softmax_rows(s);
      context.block(oq, col, nq, d_head_).noalias() = s * v.block(ok, col, nk, d_head_);
      if (cache) probs.push_back(std::move(s));
    }
  }
  Matrix<T> out = wo_.forward(context);
  if (cache) {
    cache->xq = xq;
    cache->xkv = xkv;
    cache->q = std::move(q);
    cache->k = std::move(k);
    cache->v = std::move(v);
    cache->context = std::move(context);
    cache->probs = std::move(probs);
  }
  return out;
}

template <typename T>
std::pair<Matrix<T>, Matrix<T>> MultiHeadAttention<T>::backward(const Matrix<T>& dout, const Cache& c,
                                                                 const Layout& lq, const Layout& lk) const {
  Matrix<T> dcontext = wo_.backward(c.context, dout);
  Matrix<T> dq = Matrix<T>::Zero(c.q.rows(), c.q.cols());
  Matrix<T> dk = Matrix<T>::Zero(c.k.rows(), c.k.cols());
  Matrix<T> dv = Matrix<T>::Zero(c.v.rows(), c.v.cols());
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(d_head_)));

  for (std::size_t b = 0; b < lq.size(); ++b) {
    const Eigen::Index oq = lq.offset[b], nq = lq.length[b];
    const Eigen::Index ok = lk.offset[b], nk = lk.length[b];
    for (int h = 0; h < heads_; ++h) {
      const Eigen::Index col = static_cast<Eigen::Index>(h) * d_head_;
      const Matrix<T>& p = c.probs[b * static_cast<std::size_t>(heads_) + static_cast<std::size_t>(h)];
      const auto dctx = dcontext.block(oq, col, nq, d_head_);
      Matrix<T> dp(nq, nk);
      dp.noalias() = dctx * c.v.block(ok, col, nk, d_head_).transpose();
      dv.block(ok, col, nk, d_head_).noalias() += p.transpose() * dctx;
      // softmax backward: ds = p * (dp - rowsum(dp * p))
      ColVector<T> row_dot = (dp.array() * p.array()).rowwise().sum();
      Matrix<T> ds = (p.array() * (dp.array().colwise() - row_dot.array())).matrix();
      ds *= scale;
      dq.block(oq, col, nq, d_head_).noalias() += ds * c.k.block(ok, col, nk, d_head_);
      dk.block(ok, col, nk, d_head_).noalias() += ds.transpose() * c.q.block(oq, col, nq, d_head_);
    }
  }
  Matrix<T> dxq = wq_.backward(c.xq, dq);
  Matrix<T> dxkv = wk_.backward(c.xkv, dk);
  dxkv += wv_.backward(c.xkv, dv);
  return {std::move(dxq), std::move(dxkv)};
}

template <typename T>
typename MultiHeadAttention<T>::KeyValue MultiHeadAttention<T>::project_kv(const Matrix<T>& xkv) const {
  return {wk_.forward(xkv), wv_.forward(xkv)};
}

template <typename T>
RowVector<T> MultiHeadAttention<T>::attend(const RowVector<T>& xq, const KeyValue& kv) const {
  Matrix<T> q = wq_.forward(xq);
  Matrix<T> context(1, q.cols());
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(d_head_)));
  const Eigen::Index nk = kv.k.rows();
  for (int h = 0; h < heads_; ++h) {
    const Eigen::Index col = static_cast<Eigen::Index>(h) * d_head_;
    Matrix<T> s(1, nk);
    s.noalias() = q.block(0, col, 1, d_head_) * kv.k.block(0, col, nk, d_head_).transpose();
    s *= scale;
    softmax_rows(s);
    context.block(0, col, 1, d_head_).noalias() = s * kv.v.block(0, col, nk, d_head_);
  }
  return wo_.forward(context);
}

template <typename T>
RowVector<T> MultiHeadAttention<T>::attend_incremental(const RowVector<T>& x, KeyValue& kv) const {
  const Matrix<T> xm = x;
  const Matrix<T> k = wk_.forward(xm);
  const Matrix<T> v = wv_.forward(xm);
  kv.k.conservativeResize(kv.k.rows() + 1, k.cols());
  kv.v.conservativeResize(kv.v.rows() + 1, v.cols());
  kv.k.row(kv.k.rows() - 1) = k.row(0);
  kv.v.row(kv.v.rows() - 1) = v.row(0);
  return attend(x, kv);
}

template <typename T>
Matrix<T> positional_encoding(Eigen::Index length, int d_model, Eigen::Index start) {
  Matrix<T> pe(length, d_model);
  for (Eigen::Index pos = 0; pos < length; ++pos) {
    for (int i = 0; i < d_model; i += 2) {
      const double angle =
          static_cast<double>(pos + start) / std::pow(10000.0, static_cast<double>(i) / static_cast<double>(d_model));
      pe(pos, i) = static_cast<T>(std::sin(angle));
      if (i + 1 < d_model) pe(pos, i + 1) = static_cast<T>(std::cos(angle));
    }
  }
  return pe;
}

#define ISODUB_INSTANTIATE(T)                                                                       \
  template class ParameterSet<T>;                                                                   \
  template void dropout_forward<T>(Matrix<T>&, double, std::mt19937_64*, DropoutMask<T>*);          \
  template void dropout_backward<T>(Matrix<T>&, const DropoutMask<T>&);                             \
  template class Linear<T>;                                                                         \
  template class LayerNorm<T>;                                                                      \
  template class FeedForward<T>;                                                                    \
  template class MultiHeadAttention<T>;                                                             \
  template Matrix<T> positional_encoding<T>(Eigen::Index, int, Eigen::Index);

ISODUB_INSTANTIATE(float)
ISODUB_INSTANTIATE(double)

}  // namespace isodub::model

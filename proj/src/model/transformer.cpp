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

#include "isodub/model/transformer.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "isodub/common/error.h"
#include "isodub/common/rng.h"

namespace isodub::model {

PackedBatch PackedBatch::pack(std::span<const SequencePair* const> pairs) {
  PackedBatch b;
  std::vector<Eigen::Index> src_len, tgt_len;
  for (const SequencePair* p : pairs) {
    if (p->src.empty() || p->tgt.empty()) throw DataError("empty source or target sequence in batch");
    b.src_ids.insert(b.src_ids.end(), p->src.begin(), p->src.end());
    b.tgt_in.push_back(kBosId);
    b.tgt_in.insert(b.tgt_in.end(), p->tgt.begin(), p->tgt.end() - 1);
    b.tgt_out.insert(b.tgt_out.end(), p->tgt.begin(), p->tgt.end());
    src_len.push_back(static_cast<Eigen::Index>(p->src.size()));
    tgt_len.push_back(static_cast<Eigen::Index>(p->tgt.size()));
  }
  b.src = Layout::from_lengths(src_len);
  b.tgt = Layout::from_lengths(tgt_len);
  return b;
}

PackedBatch PackedBatch::pack(std::span<const SequencePair> pairs) {
  std::vector<const SequencePair*> ptrs;
  for (const auto& p : pairs) ptrs.push_back(&p);
  return pack(std::span<const SequencePair* const>(ptrs));
}

PaddedBatch PaddedBatch::from_pairs(std::span<const SequencePair> pairs) {
  PaddedBatch b;
  b.batch = static_cast<int>(pairs.size());
  for (const auto& p : pairs) {
    b.src_len = std::max(b.src_len, static_cast<int>(p.src.size()));
    b.tgt_len = std::max(b.tgt_len, static_cast<int>(p.tgt.size()));
  }
  b.src.assign(static_cast<std::size_t>(b.batch * b.src_len), kPadId);
  b.tgt.assign(static_cast<std::size_t>(b.batch * b.tgt_len), kPadId);
  for (int i = 0; i < b.batch; ++i) {
    std::copy(pairs[i].src.begin(), pairs[i].src.end(), b.src.begin() + i * b.src_len);
    std::copy(pairs[i].tgt.begin(), pairs[i].tgt.end(), b.tgt.begin() + i * b.tgt_len);
  }
  return b;
}

template <typename T>
Transformer<T>::Transformer(const ModelConfig& config, int src_vocab, int tgt_vocab)
    : config_(config), src_vocab_(src_vocab), tgt_vocab_(tgt_vocab) {
  config_.validate();
  if (src_vocab <= kEosId || tgt_vocab <= kEosId) throw UsageError("vocabularies must include the special tokens");
  const int d = config_.d_model;
  src_embed_ = &params_.add("src_embed", src_vocab, d);
  tgt_embed_ = &params_.add("tgt_embed", tgt_vocab, d);
  for (int l = 0; l < config_.enc_layers; ++l) {
    const std::string p = "enc." + std::to_string(l);
    enc_.push_back({LayerNorm<T>(params_, p + ".ln_attn", d), LayerNorm<T>(params_, p + ".ln_ffn", d),
                    Attention(params_, p + ".self_attn", d, config_.heads),
                    FeedForward<T>(params_, p + ".ffn", d, config_.d_ffn)});
  }
  enc_final_ = LayerNorm<T>(params_, "enc.ln_final", d);
  for (int l = 0; l < config_.dec_layers; ++l) {
    const std::string p = "dec." + std::to_string(l);
    dec_.push_back({LayerNorm<T>(params_, p + ".ln_self", d), LayerNorm<T>(params_, p + ".ln_cross", d),
                    LayerNorm<T>(params_, p + ".ln_ffn", d), Attention(params_, p + ".self_attn", d, config_.heads),
                    Attention(params_, p + ".cross_attn", d, config_.heads),
                    FeedForward<T>(params_, p + ".ffn", d, config_.d_ffn)});
  }
  dec_final_ = LayerNorm<T>(params_, "dec.ln_final", d);
  out_proj_ = Linear<T>(params_, "out_proj", d, tgt_vocab);
  initialize(config_.seed);
}

template <typename T>
void Transformer<T>::initialize(std::uint64_t seed) {
  auto rng = substream(seed, "init");
  auto ends_with = [](const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i];
    if (p.name == "src_embed" || p.name == "tgt_embed") {
      std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(static_cast<double>(config_.d_model)));
      for (Eigen::Index j = 0; j < p.value.size(); ++j) p.value.data()[j] = static_cast<T>(dist(rng));
      p.value.row(kPadId).setZero();
    } else if (ends_with(p.name, ".weight")) {
      const double bound = std::sqrt(6.0 / static_cast<double>(p.value.rows() + p.value.cols()));
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (Eigen::Index j = 0; j < p.value.size(); ++j) p.value.data()[j] = static_cast<T>(dist(rng));
    } else if (ends_with(p.name, ".gamma")) {
      p.value.setOnes();
    } else {
      p.value.setZero();
    }
    p.grad.setZero();
  }
}

template <typename T>
void Transformer<T>::check_ids(std::span<const int> ids, int vocab, const char* side) const {
  for (int id : ids)
    if (id < 0 || id >= vocab)
      throw DataError(std::string(side) + " token id " + std::to_string(id) + " outside vocabulary of " +
                      std::to_string(vocab));
}

template <typename T>
Matrix<T> Transformer<T>::embed(const Parameter<T>& table, std::span<const int> ids, const Layout& layout) const {
  const int d = config_.d_model;
  const T scale = static_cast<T>(std::sqrt(static_cast<double>(d)));
  Matrix<T> x(layout.total, d);
  Eigen::Index longest = 0;
  for (auto n : layout.length) longest = std::max(longest, n);
  const Matrix<T> pe = positional_encoding<T>(longest, d);
  for (std::size_t b = 0; b < layout.size(); ++b)
    for (Eigen::Index t = 0; t < layout.length[b]; ++t) {
      const Eigen::Index r = layout.offset[b] + t;
      x.row(r) = table.value.row(ids[static_cast<std::size_t>(r)]) * scale + pe.row(t);
    }
  return x;
}

template <typename T>
void Transformer<T>::embed_backward(Parameter<T>& table, std::span<const int> ids, const Matrix<T>& dx) {
  const T scale = static_cast<T>(std::sqrt(static_cast<double>(config_.d_model)));
  for (Eigen::Index r = 0; r < dx.rows(); ++r) table.grad.row(ids[static_cast<std::size_t>(r)]) += dx.row(r) * scale;
}

template <typename T>
Matrix<T> Transformer<T>::forward(const PackedBatch& batch, ForwardState* state, std::mt19937_64* rng) const {
  check_ids(batch.src_ids, src_vocab_, "source");
  check_ids(batch.tgt_in, tgt_vocab_, "target");
  check_ids(batch.tgt_out, tgt_vocab_, "target");
  const double p = config_.dropout;
  ForwardState local;
  ForwardState& s = state ? *state : local;
  const bool keep = state != nullptr;
  s.batch = batch;
  s.enc.assign(enc_.size(), {});
  s.dec.assign(dec_.size(), {});

  Matrix<T> x = embed(*src_embed_, batch.src_ids, batch.src);
  dropout_forward(x, p, rng, &s.drop_src);
  for (std::size_t l = 0; l < enc_.size(); ++l) {
    const auto& L = enc_[l];
    auto& c = s.enc[l];
    Matrix<T> h = L.ln_attn.forward(x, keep ? &c.ln_attn : nullptr);
    Matrix<T> a = L.self_attn.forward(h, batch.src, h, batch.src, false, keep ? &c.attn : nullptr);
    dropout_forward(a, p, rng, &c.drop_attn);
    x += a;
    h = L.ln_ffn.forward(x, keep ? &c.ln_ffn : nullptr);
    Matrix<T> f = L.ffn.forward(h, keep ? &c.ffn : nullptr);
    dropout_forward(f, p, rng, &c.drop_ffn);
    x += f;
  }
  Matrix<T> memory = enc_final_.forward(x, keep ? &s.enc_final : nullptr);

  Matrix<T> y = embed(*tgt_embed_, batch.tgt_in, batch.tgt);
  dropout_forward(y, p, rng, &s.drop_tgt);
  for (std::size_t l = 0; l < dec_.size(); ++l) {
    const auto& L = dec_[l];
    auto& c = s.dec[l];
    Matrix<T> h = L.ln_self.forward(y, keep ? &c.ln_self : nullptr);
    Matrix<T> a = L.self_attn.forward(h, batch.tgt, h, batch.tgt, true, keep ? &c.self_attn : nullptr);
    dropout_forward(a, p, rng, &c.drop_self);
    y += a;
    h = L.ln_cross.forward(y, keep ? &c.ln_cross : nullptr);
    Matrix<T> ca = L.cross_attn.forward(h, batch.tgt, memory, batch.src, false, keep ? &c.cross_attn : nullptr);
    dropout_forward(ca, p, rng, &c.drop_cross);
    y += ca;
    h = L.ln_ffn.forward(y, keep ? &c.ln_ffn : nullptr);
    Matrix<T> f = L.ffn.forward(h, keep ? &c.ffn : nullptr);
    dropout_forward(f, p, rng, &c.drop_ffn);
    y += f;
  }
  Matrix<T> hidden = dec_final_.forward(y, keep ? &s.dec_final : nullptr);
  Matrix<T> logits = out_proj_.forward(hidden);
  if (keep) {
    s.memory = std::move(memory);
    s.hidden = std::move(hidden);
  }
  return logits;
}

template <typename T>
void Transformer<T>::backward(const ForwardState& s, const Matrix<T>& dlogits) {
  const auto& batch = s.batch;
  Matrix<T> dy = dec_final_.backward(out_proj_.backward(s.hidden, dlogits), s.dec_final);
  Matrix<T> dmemory = Matrix<T>::Zero(s.memory.rows(), s.memory.cols());
  for (std::size_t li = dec_.size(); li-- > 0;) {
    const auto& L = dec_[li];
    const auto& c = s.dec[li];
    Matrix<T> t = dy;
    dropout_backward(t, c.drop_ffn);
    dy += L.ln_ffn.backward(L.ffn.backward(t, c.ffn), c.ln_ffn);

    t = dy;
    dropout_backward(t, c.drop_cross);
    auto [dq_cross, dkv_cross] = L.cross_attn.backward(t, c.cross_attn, batch.tgt, batch.src);
    dmemory += dkv_cross;
    dy += L.ln_cross.backward(dq_cross, c.ln_cross);

    t = dy;
    dropout_backward(t, c.drop_self);
    auto [dq_self, dkv_self] = L.self_attn.backward(t, c.self_attn, batch.tgt, batch.tgt);
    dq_self += dkv_self;
    dy += L.ln_self.backward(dq_self, c.ln_self);
  }
  dropout_backward(dy, s.drop_tgt);
  embed_backward(*tgt_embed_, batch.tgt_in, dy);

  Matrix<T> dx = enc_final_.backward(dmemory, s.enc_final);
  for (std::size_t li = enc_.size(); li-- > 0;) {
    const auto& L = enc_[li];
    const auto& c = s.enc[li];
    Matrix<T> t = dx;
    dropout_backward(t, c.drop_ffn);
    dx += L.ln_ffn.backward(L.ffn.backward(t, c.ffn), c.ln_ffn);

    t = dx;
    dropout_backward(t, c.drop_attn);
    auto [dq, dkv] = L.self_attn.backward(t, c.attn, batch.src, batch.src);
    dq += dkv;
    dx += L.ln_attn.backward(dq, c.ln_attn);
  }
  dropout_backward(dx, s.drop_src);
  embed_backward(*src_embed_, batch.src_ids, dx);
}

template <typename T>
PaddedLogits<T> Transformer<T>::forward_padded(const PaddedBatch& padded) const {
  if (padded.src.size() != static_cast<std::size_t>(padded.batch * padded.src_len) ||
      padded.tgt.size() != static_cast<std::size_t>(padded.batch * padded.tgt_len))
    throw DataError("padded batch shape mismatch");
  std::vector<SequencePair> pairs(static_cast<std::size_t>(padded.batch));
  for (int b = 0; b < padded.batch; ++b) {
    auto strip = [](auto begin, auto end) {
      std::vector<int> v(begin, end);
      while (!v.empty() && v.back() == kPadId) v.pop_back();
      return v;
    };
    pairs[b].src = strip(padded.src.begin() + b * padded.src_len, padded.src.begin() + (b + 1) * padded.src_len);
    pairs[b].tgt = strip(padded.tgt.begin() + b * padded.tgt_len, padded.tgt.begin() + (b + 1) * padded.tgt_len);
  }
  const PackedBatch packed = PackedBatch::pack(pairs);
  const Matrix<T> logits = forward(packed, nullptr, nullptr);
  PaddedLogits<T> out;
  out.batch = padded.batch;
  out.length = padded.tgt_len;
  out.vocab = tgt_vocab_;
  out.values.assign(static_cast<std::size_t>(out.batch) * out.length * out.vocab, T(0));
  for (int b = 0; b < padded.batch; ++b)
    for (Eigen::Index t = 0; t < packed.tgt.length[b]; ++t)
      for (int v = 0; v < tgt_vocab_; ++v)
        out.values[(static_cast<std::size_t>(b) * out.length + t) * out.vocab + v] = logits(packed.tgt.offset[b] + t, v);
  return out;
}

template <typename T>
typename Transformer<T>::Memory Transformer<T>::encode(std::span<const int> src) const {
  if (src.empty()) throw DataError("empty source sequence");
  check_ids(src, src_vocab_, "source");
  const Layout layout = Layout::from_lengths({static_cast<Eigen::Index>(src.size())});
  Matrix<T> x = embed(*src_embed_, src, layout);
  for (const auto& L : enc_) {
    Matrix<T> h = L.ln_attn.forward(x, nullptr);
    x += L.self_attn.forward(h, layout, h, layout, false, nullptr);
    h = L.ln_ffn.forward(x, nullptr);
    x += L.ffn.forward(h, nullptr);
  }
  const Matrix<T> memory = enc_final_.forward(x, nullptr);
  Memory m;
  for (const auto& L : dec_) m.cross.push_back(L.cross_attn.project_kv(memory));
  return m;
}

template <typename T>
typename Transformer<T>::DecoderState Transformer<T>::start() const {
  DecoderState s;
  s.self.resize(dec_.size());
  for (auto& kv : s.self) {
    kv.k.resize(0, config_.d_model);
    kv.v.resize(0, config_.d_model);
  }
  return s;
}

template <typename T>
RowVector<T> Transformer<T>::step(const Memory& memory, DecoderState& state, int token) const {
  if (token < 0 || token >= tgt_vocab_) throw DataError("target token outside vocabulary");
  const int d = config_.d_model;
  const T scale = static_cast<T>(std::sqrt(static_cast<double>(d)));
  Matrix<T> y = tgt_embed_->value.row(token) * scale + positional_encoding<T>(1, d, state.position);
  for (std::size_t l = 0; l < dec_.size(); ++l) {
    const auto& L = dec_[l];
    Matrix<T> h = L.ln_self.forward(y, nullptr);
    y += L.self_attn.attend_incremental(h, state.self[l]);
    h = L.ln_cross.forward(y, nullptr);
    y += L.cross_attn.attend(h, memory.cross[l]);
    h = L.ln_ffn.forward(y, nullptr);
    y += L.ffn.forward(h, nullptr);
  }
  ++state.position;
  return out_proj_.forward(dec_final_.forward(y, nullptr));
}

template <typename T>
std::vector<Matrix<T>> Transformer<T>::snapshot() const {
  std::vector<Matrix<T>> out;
  out.reserve(params_.size());
  for (std::size_t i = 0; i < params_.size(); ++i) out.push_back(params_[i].value);
  return out;
}

template <typename T>
void Transformer<T>::restore(const std::vector<Matrix<T>>& values) {
  if (values.size() != params_.size()) throw DataError("parameter snapshot size mismatch");
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (values[i].rows() != params_[i].value.rows() || values[i].cols() != params_[i].value.cols())
      throw DataError("parameter shape mismatch for " + params_[i].name);
    params_[i].value = values[i];
  }
}

template class Transformer<float>;
template class Transformer<double>;

}  // namespace isodub::model

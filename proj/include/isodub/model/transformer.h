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

#ifndef ISODUB_MODEL_TRANSFORMER_H_
#define ISODUB_MODEL_TRANSFORMER_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "isodub/model/config.h"
#include "isodub/model/layers.h"

namespace isodub::model {

// Ids shared with codec::Vocabulary.
inline constexpr int kPadId = 0;
inline constexpr int kBosId = 1;
inline constexpr int kEosId = 2;

// Target side ends with EOS; the decoder input is BOS + target[:-1].
struct SequencePair {
  std::vector<int> src;
  std::vector<int> tgt;
};

struct PackedBatch {
  std::vector<int> src_ids;
  std::vector<int> tgt_in;
  std::vector<int> tgt_out;
  Layout src;
  Layout tgt;

  static PackedBatch pack(std::span<const SequencePair* const> pairs);
  static PackedBatch pack(std::span<const SequencePair> pairs);
};

// Fixed-width batch where rows are right-padded with PAD.
struct PaddedBatch {
  int batch = 0;
  int src_len = 0;
  int tgt_len = 0;
  std::vector<int> src;  // batch * src_len
  std::vector<int> tgt;  // batch * tgt_len, each row ends with EOS then PAD

  static PaddedBatch from_pairs(std::span<const SequencePair> pairs);
};

template <typename T>
struct PaddedLogits {
  int batch = 0;
  int length = 0;
  int vocab = 0;
  std::vector<T> values;  // zero at padded target positions

  T at(int b, int t, int v) const {
    return values[(static_cast<std::size_t>(b) * length + t) * vocab + v];
  }
};

// Pre-norm encoder-decoder transformer with sinusoidal positions.
template <typename T>
class Transformer {
 public:
  using Attention = MultiHeadAttention<T>;

  struct EncoderLayer {
    LayerNorm<T> ln_attn, ln_ffn;
    Attention self_attn;
    FeedForward<T> ffn;
  };
  struct DecoderLayer {
    LayerNorm<T> ln_self, ln_cross, ln_ffn;
    Attention self_attn, cross_attn;
    FeedForward<T> ffn;
  };

  struct EncoderCache {
    typename LayerNorm<T>::Cache ln_attn, ln_ffn;
    typename Attention::Cache attn;
    typename FeedForward<T>::Cache ffn;
    DropoutMask<T> drop_attn, drop_ffn;
  };
  struct DecoderCache {
    typename LayerNorm<T>::Cache ln_self, ln_cross, ln_ffn;
    typename Attention::Cache self_attn, cross_attn;
    typename FeedForward<T>::Cache ffn;
    DropoutMask<T> drop_self, drop_cross, drop_ffn;
  };

  struct ForwardState {
    PackedBatch batch;
    DropoutMask<T> drop_src, drop_tgt;
    std::vector<EncoderCache> enc;
    typename LayerNorm<T>::Cache enc_final;
    Matrix<T> memory;
    std::vector<DecoderCache> dec;
    typename LayerNorm<T>::Cache dec_final;
    Matrix<T> hidden;  // decoder output before the projection
  };

  // Incremental decoding state.
  struct Memory {
    std::vector<typename Attention::KeyValue> cross;
  };
  struct DecoderState {
    std::vector<typename Attention::KeyValue> self;
    Eigen::Index position = 0;
  };

  Transformer(const ModelConfig& config, int src_vocab, int tgt_vocab);
  Transformer(const Transformer&) = delete;
  Transformer& operator=(const Transformer&) = delete;

  // Xavier-uniform weights, N(0, 1/d) embeddings, zero biases, unit gains.
  void initialize(std::uint64_t seed);

  // Logits for every packed target row. dropout_rng == nullptr disables
  // dropout (evaluation).
  Matrix<T> forward(const PackedBatch& batch, ForwardState* state, std::mt19937_64* dropout_rng) const;
  // Accumulates into params().grad.
  void backward(const ForwardState& state, const Matrix<T>& dlogits);

  PaddedLogits<T> forward_padded(const PaddedBatch& batch) const;

  Memory encode(std::span<const int> src) const;
  DecoderState start() const;
  RowVector<T> step(const Memory& memory, DecoderState& state, int token) const;

  ParameterSet<T>& params() { return params_; }
  const ParameterSet<T>& params() const { return params_; }
  const ModelConfig& config() const { return config_; }
  int src_vocab() const { return src_vocab_; }
  int tgt_vocab() const { return tgt_vocab_; }

  std::vector<Matrix<T>> snapshot() const;
  void restore(const std::vector<Matrix<T>>& values);
  template <typename U>
  void copy_from(const Transformer<U>& other) {
    for (std::size_t i = 0; i < params_.size(); ++i) params_[i].value = other.params()[i].value.template cast<T>();
  }

 private:
  Matrix<T> embed(const Parameter<T>& table, std::span<const int> ids, const Layout& layout) const;
  void embed_backward(Parameter<T>& table, std::span<const int> ids, const Matrix<T>& dx);
  void check_ids(std::span<const int> ids, int vocab, const char* side) const;

  ModelConfig config_;
  int src_vocab_;
  int tgt_vocab_;
  ParameterSet<T> params_;
  Parameter<T>* src_embed_;
  Parameter<T>* tgt_embed_;
  std::vector<EncoderLayer> enc_;
  LayerNorm<T> enc_final_;
  std::vector<DecoderLayer> dec_;
  LayerNorm<T> dec_final_;
  Linear<T> out_proj_;
};

}  // namespace isodub::model

#endif  // ISODUB_MODEL_TRANSFORMER_H_

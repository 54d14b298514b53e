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

#include "isodub/model/beam.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace isodub::model {

namespace {

template <typename T>
std::vector<double> log_softmax(const RowVector<T>& logits) {
  std::vector<double> out(static_cast<std::size_t>(logits.size()));
  const double mx = static_cast<double>(logits.maxCoeff());
  double sum = 0.0;
  for (Eigen::Index j = 0; j < logits.size(); ++j) sum += std::exp(static_cast<double>(logits(j)) - mx);
  const double lse = mx + std::log(sum);
  for (Eigen::Index j = 0; j < logits.size(); ++j) out[static_cast<std::size_t>(j)] = static_cast<double>(logits(j)) - lse;
  out[kPadId] = -std::numeric_limits<double>::infinity();
  out[kBosId] = -std::numeric_limits<double>::infinity();
  return out;
}

template <typename T>
struct Live {
  std::vector<int> tokens;
  double logprob = 0.0;
  typename Transformer<T>::DecoderState state;
  std::vector<double> next;  // log-probs of the next token
};

}  // namespace

double normalized_score(double logprob, std::size_t length, double length_penalty) {
  if (length == 0) return logprob;
  return logprob / std::pow(static_cast<double>(length), length_penalty);
}

template <typename T>
Hypothesis beam_decode(const Transformer<T>& model, std::span<const int> src, int beam, int max_len,
                       double length_penalty) {
  if (beam < 1) throw std::invalid_argument("beam must be at least 1");
  if (max_len < 1) throw std::invalid_argument("max_len must be at least 1");
  const auto memory = model.encode(src);

  std::vector<Live<T>> live(1);
  live[0].state = model.start();
  live[0].next = log_softmax<T>(model.step(memory, live[0].state, kBosId));
  std::vector<Hypothesis> finished;

  struct Candidate {
    double logprob;
    std::size_t parent;
    int token;
  };
  const std::size_t beam_n = static_cast<std::size_t>(beam);
  for (int t = 0; t < max_len && !live.empty(); ++t) {
    std::vector<Candidate> cand;
    cand.reserve(live.size() * live[0].next.size());
    for (std::size_t h = 0; h < live.size(); ++h)
      for (std::size_t v = 0; v < live[h].next.size(); ++v)
        if (std::isfinite(live[h].next[v])) cand.push_back({live[h].logprob + live[h].next[v], h, static_cast<int>(v)});
    const std::size_t keep = std::min(cand.size(), 2 * beam_n);
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end(),
                      [](const Candidate& a, const Candidate& b) {
                        if (a.logprob != b.logprob) return a.logprob > b.logprob;
                        if (a.parent != b.parent) return a.parent < b.parent;
                        return a.token < b.token;
                      });
    const bool last_step = t + 1 == max_len;
    std::vector<Live<T>> next_live;
    for (std::size_t i = 0; i < keep; ++i) {
      const Candidate& c = cand[i];
      if (c.token == kEosId) {
        if (i < beam_n && finished.size() < beam_n) {
          Hypothesis hyp;
          hyp.tokens = live[c.parent].tokens;
          hyp.logprob = c.logprob;
          hyp.score = normalized_score(c.logprob, hyp.tokens.size() + 1, length_penalty);
          hyp.complete = true;
          finished.push_back(std::move(hyp));
        }
        continue;
      }
      if (next_live.size() >= beam_n) continue;
      Live<T> n;
      n.tokens = live[c.parent].tokens;
      n.tokens.push_back(c.token);
      n.logprob = c.logprob;
      n.state = live[c.parent].state;
      if (!last_step) n.next = log_softmax<T>(model.step(memory, n.state, c.token));
      next_live.push_back(std::move(n));
    }
    live = std::move(next_live);
    if (finished.size() >= beam_n) break;
  }

  // Stopping at max_len: live partials compete with whatever finished.
  Hypothesis best;
  best.score = -std::numeric_limits<double>::infinity();
  for (const auto& h : finished)
    if (h.score > best.score) best = h;
  if (finished.size() >= beam_n) return best;
  for (const auto& l : live) {
    const double s = normalized_score(l.logprob, l.tokens.size(), length_penalty);
    if (s > best.score) {
      best.tokens = l.tokens;
      best.logprob = l.logprob;
      best.score = s;
      best.complete = false;
    }
  }
  return best;
}

template <typename T>
Hypothesis greedy_decode(const Transformer<T>& model, std::span<const int> src, int max_len, double length_penalty) {
  const auto memory = model.encode(src);
  auto state = model.start();
  Hypothesis hyp;
  int token = kBosId;
  for (int t = 0; t < max_len; ++t) {
    const auto lp = log_softmax<T>(model.step(memory, state, token));
    token = static_cast<int>(std::max_element(lp.begin(), lp.end()) - lp.begin());
    hyp.logprob += lp[static_cast<std::size_t>(token)];
    if (token == kEosId) {
      hyp.complete = true;
      hyp.score = normalized_score(hyp.logprob, hyp.tokens.size() + 1, length_penalty);
      return hyp;
    }
    hyp.tokens.push_back(token);
  }
  hyp.score = normalized_score(hyp.logprob, hyp.tokens.size(), length_penalty);
  return hyp;
}

template <typename T>
double sequence_logprob(const Transformer<T>& model, std::span<const int> src, std::span<const int> tokens) {
  SequencePair pair{std::vector<int>(src.begin(), src.end()), std::vector<int>(tokens.begin(), tokens.end())};
  const PackedBatch batch = PackedBatch::pack(std::span<const SequencePair>(&pair, 1));
  const Matrix<T> logits = model.forward(batch, nullptr, nullptr);
  double total = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const RowVector<T> row = logits.row(r);
    total += log_softmax<T>(row)[static_cast<std::size_t>(tokens[static_cast<std::size_t>(r)])];
  }
  return total;
}

template Hypothesis beam_decode<float>(const Transformer<float>&, std::span<const int>, int, int, double);
template Hypothesis beam_decode<double>(const Transformer<double>&, std::span<const int>, int, int, double);
template Hypothesis greedy_decode<float>(const Transformer<float>&, std::span<const int>, int, double);
template Hypothesis greedy_decode<double>(const Transformer<double>&, std::span<const int>, int, double);
template double sequence_logprob<float>(const Transformer<float>&, std::span<const int>, std::span<const int>);
template double sequence_logprob<double>(const Transformer<double>&, std::span<const int>, std::span<const int>);

}  // namespace isodub::model

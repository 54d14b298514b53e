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

#ifndef ISODUB_MODEL_BEAM_H_
#define ISODUB_MODEL_BEAM_H_

#include <span>
#include <vector>

#include "isodub/model/transformer.h"

namespace isodub::model {

struct Hypothesis {
  std::vector<int> tokens;  // without the final EOS
  double logprob = 0.0;     // includes the EOS step when complete
  double score = 0.0;       // logprob / length^length_penalty
  bool complete = false;    // false: max_len reached before EOS
};

// Length-normalized beam search. PAD and BOS are never generated. At each
// step the top 2*beam expansions are ranked; EOS expansions inside the top
// `beam` are finalized and the best `beam` others stay live. Search ends
// once `beam` hypotheses are finalized or after max_len steps.
template <typename T>
Hypothesis beam_decode(const Transformer<T>& model, std::span<const int> src, int beam, int max_len,
                       double length_penalty = 1.0);

template <typename T>
Hypothesis greedy_decode(const Transformer<T>& model, std::span<const int> src, int max_len,
                         double length_penalty = 1.0);

// Log-probability of `tokens` (which must end with EOS) under a full
// teacher-forced forward pass.
template <typename T>
double sequence_logprob(const Transformer<T>& model, std::span<const int> src, std::span<const int> tokens);

double normalized_score(double logprob, std::size_t length, double length_penalty);

}  // namespace isodub::model

#endif  // ISODUB_MODEL_BEAM_H_

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


#include <cmath>
#include <functional>

#include "doctest.h"
#include "isodub/model/beam.h"
#include "isodub/model/transformer.h"

using namespace isodub::model;

namespace {

// Vocabulary: PAD, BOS, EOS and two real tokens, so three choices per step.
constexpr int kVocab = 5;

std::unique_ptr<Transformer<double>> toy_model(std::uint64_t seed) {
  ModelConfig c;
  c.enc_layers = 1;
  c.dec_layers = 1;
  c.d_model = 8;
  c.heads = 2;
  c.d_ffn = 16;
  c.dropout = 0.0;
  auto m = std::make_unique<Transformer<double>>(c, 6, kVocab);
  m->initialize(seed);
  // Sharpen the output distribution so hypotheses are well separated.
  for (std::size_t i = 0; i < m->params().size(); ++i) m->params()[i].value *= 2.5;
  return m;
}

struct Best {
  std::vector<int> tokens;
  double score = -INFINITY;
  bool complete = true;
};

// Scores every sequence of up to max_len tokens ending in EOS, plus the
// unfinished sequences of exactly max_len tokens.
Best exhaustive(const Transformer<double>& m, const std::vector<int>& src, int max_len, double lp) {
  Best best;
  std::function<void(std::vector<int>&)> rec = [&](std::vector<int>& prefix) {
    auto full = prefix;
    full.push_back(kEosId);
    const double s = normalized_score(sequence_logprob(m, src, full), full.size(), lp);
    if (s > best.score) best = {prefix, s, true};
    if (static_cast<int>(prefix.size()) == max_len) {
      const double p = normalized_score(sequence_logprob(m, src, prefix), prefix.size(), lp);
      if (p > best.score) best = {prefix, p, false};
      return;
    }
    if (static_cast<int>(full.size()) == max_len) {
      for (int t = 3; t < kVocab; ++t) {
        prefix.push_back(t);
        const double p = normalized_score(sequence_logprob(m, src, prefix), prefix.size(), lp);
        if (p > best.score) best = {prefix, p, false};
        prefix.pop_back();
      }
      return;
    }
    for (int t = 3; t < kVocab; ++t) {
      prefix.push_back(t);
      rec(prefix);
      prefix.pop_back();
    }
  };
  std::vector<int> empty;
  rec(empty);
  return best;
}

}  // namespace

TEST_CASE("wide beam equals exhaustive search over short sequences") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto m = toy_model(seed);
    const std::vector<int> src{3, static_cast<int>(3 + seed % 3), kEosId};
    for (const double lp : {1.0, 0.0}) {
      const auto oracle = exhaustive(*m, src, 4, lp);
      // 16 live hypotheses cover the whole tree of depth four.
      const auto hyp = beam_decode(*m, src, 16, 4, lp);
      CHECK_MESSAGE(hyp.tokens == oracle.tokens, "seed " << seed << " lp " << lp);
      CHECK(hyp.complete == oracle.complete);
      CHECK(hyp.score == doctest::Approx(oracle.score).epsilon(1e-9));
    }
  }
}

TEST_CASE("beam of one is greedy decoding") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto m = toy_model(seed);
    const std::vector<int> src{4, 3, 5, kEosId};
    const auto g = greedy_decode(*m, src, 12);
    const auto b = beam_decode(*m, src, 1, 12);
    CHECK(g.tokens == b.tokens);
    CHECK(g.complete == b.complete);
    CHECK(g.logprob == doctest::Approx(b.logprob));
  }
}

TEST_CASE("beam five scores at least as well as greedy; wider beams never hurt") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto m = toy_model(seed);
    const std::vector<int> src{5, 4, kEosId};
    const auto g = greedy_decode(*m, src, 10);
    const auto b = beam_decode(*m, src, 5, 10);
    if (g.complete) CHECK(b.score >= g.score - 1e-12);
    double prev = -INFINITY;
    for (const int w : {1, 2, 4, 8}) {
      const auto h = beam_decode(*m, src, w, 10);
      if (!h.complete) continue;
      CHECK_MESSAGE(h.score >= prev - 1e-12, "seed " << seed << " beam " << w);
      prev = h.score;
    }
  }
}

TEST_CASE("reported log-probabilities agree with a full forward pass") {
  const auto m = toy_model(3);
  const std::vector<int> src{3, 4, kEosId};
  const auto h = beam_decode(*m, src, 4, 10);
  REQUIRE(h.complete);
  auto full = h.tokens;
  full.push_back(kEosId);
  CHECK(h.logprob == doctest::Approx(sequence_logprob(*m, src, full)).epsilon(1e-9));
  CHECK(h.score == doctest::Approx(h.logprob / static_cast<double>(full.size())));
}

TEST_CASE("max_len cut returns the best partial hypothesis") {
  // A model that never wants to stop: push EOS logits far down.
  auto m = toy_model(4);
  auto* bias = m->params().find("out_proj.bias");
  REQUIRE(bias != nullptr);
  (*bias).value(0, kEosId) = -50.0;
  const std::vector<int> src{3, kEosId};
  const auto h = beam_decode(*m, src, 3, 6);
  CHECK_FALSE(h.complete);
  CHECK(h.tokens.size() == 6);
  const auto g = greedy_decode(*m, src, 6);
  CHECK_FALSE(g.complete);
  CHECK(g.tokens.size() == 6);
  for (const int t : h.tokens) {
    CHECK(t != kPadId);
    CHECK(t != kBosId);
  }
  CHECK_THROWS(beam_decode(*m, src, 0, 6));
}

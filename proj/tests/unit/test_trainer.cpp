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
#include <random>

#include "doctest.h"
#include "fixtures.h"
#include "isodub/common/error.h"
#include "isodub/metrics/metrics.h"
#include "isodub/model/beam.h"
#include "isodub/model/checkpoint.h"
#include "isodub/model/trainer.h"

using namespace isodub;
using namespace isodub::model;

namespace {

ModelConfig small(int epochs) {
  ModelConfig c;
  c.enc_layers = 1;
  c.dec_layers = 1;
  c.d_model = 32;
  c.heads = 4;
  c.d_ffn = 64;
  c.dropout = 0.1;
  c.batch_size = 10;
  c.max_epochs = epochs;
  c.seed = 21;
  return c;
}

// Copy task over tokens 3..vocab-1.
std::vector<SequencePair> copy_pairs(int n, int vocab, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(2, 6), tok(3, vocab - 1);
  std::vector<SequencePair> out(n);
  for (auto& p : out) {
    const int l = len(rng);
    for (int i = 0; i < l; ++i) p.src.push_back(tok(rng));
    p.src.push_back(kEosId);
    p.tgt = p.src;
  }
  return out;
}

std::string spell(const std::vector<int>& ids) {
  std::string s;
  for (int id : ids) {
    if (id == kEosId) break;
    s += (s.empty() ? "t" : " t") + std::to_string(id);
  }
  return s;
}

Validator copy_validator(const std::vector<SequencePair>& data) {
  return [&data](const Transformer<float>& m) {
    std::vector<std::string> hyp, ref;
    for (const auto& p : data) {
      hyp.push_back(spell(greedy_decode(m, p.src, 12).tokens));
      ref.push_back(spell(p.tgt));
    }
    return ValidationScores{metrics::corpus_bleu(hyp, ref), std::nullopt};
  };
}

bool same_params(const Transformer<float>& a, const Transformer<float>& b) {
  for (std::size_t i = 0; i < a.params().size(); ++i)
    if (a.params()[i].value != b.params()[i].value) return false;
  return true;
}

}  // namespace

TEST_CASE("copy task reaches BLEU above 90") {
  const auto data = copy_pairs(50, 12, 1);
  auto cfg = small(200);
  cfg.lr = 3e-3;
  Trainer tr(cfg, 12, 12);
  tr.model().initialize(cfg.seed);
  const auto validate = copy_validator(data);
  int reached = 0;
  tr.fit(data, data, validate, [&](const EpochLog& log, Trainer& t) {
    if (log.val_bleu > 90 && reached == 0) {
      reached = log.epoch;
      t.set_completed_epochs(t.config().max_epochs);  // stop early
    }
  });
  MESSAGE("copy task reached BLEU>90 at epoch " << reached);
  CHECK(reached > 0);
  CHECK(tr.best().bleu > 90);
}

TEST_CASE("first-epoch loss is near ln V") {
  const auto data = copy_pairs(40, 30, 2);
  Trainer tr(small(1), 30, 30);
  tr.model().initialize(5);
  CHECK(std::abs(tr.evaluate_loss(data) - std::log(30.0)) < 0.5);
  const double first = tr.train_epoch(data, 1);
  CHECK(std::abs(first - std::log(30.0)) < 0.6);
}

TEST_CASE("same seed, same weights; resuming matches an uninterrupted run") {
  const auto data = copy_pairs(30, 15, 3);
  Trainer a(small(4), 15, 15), b(small(4), 15, 15);
  a.model().initialize(9);
  b.model().initialize(9);
  a.fit(data, data, {});
  b.fit(data, data, {});
  CHECK(same_params(a.model(), b.model()));

  // Two epochs, save to bytes with optimizer state, reload, two more.
  Trainer first(small(2), 15, 15);
  first.model().initialize(9);
  first.fit(data, data, {});
  Checkpoint ck;
  ck.config = first.config();
  ck.src_vocab_size = ck.tgt_vocab_size = 15;
  ck.epoch = 2;
  ck.capture_params(first.model());
  ck.capture_optimizer(first.optimizer(), first.model());
  const auto reloaded = Checkpoint::parse(ck.serialize());
  REQUIRE(reloaded.has_optimizer());

  Trainer second(small(4), 15, 15);
  reloaded.restore_params(second.model());
  reloaded.restore_optimizer(second.optimizer(), second.model());
  second.set_completed_epochs(reloaded.epoch);
  const auto logs = second.fit(data, data, {});
  REQUIRE(logs.size() == 2);
  CHECK(logs.front().epoch == 3);
  CHECK(same_params(a.model(), second.model()));
}

TEST_CASE("best checkpoint: higher BLEU wins, ties go to the lower loss") {
  Trainer::Best best;
  CHECK(Trainer::improves(0.0, 5.0, best));
  best.bleu = 40;
  best.val_loss = 1.0;
  CHECK(Trainer::improves(41, 9.0, best));
  CHECK_FALSE(Trainer::improves(39, 0.1, best));
  CHECK(Trainer::improves(40, 0.9, best));
  CHECK_FALSE(Trainer::improves(40, 1.0, best));
}

TEST_CASE("a non-finite loss aborts with a diagnostic") {
  const auto data = copy_pairs(10, 10, 4);
  Trainer tr(small(1), 10, 10);
  tr.model().initialize(1);
  tr.model().params()[0].value.setConstant(std::nanf(""));
  try {
    tr.train_epoch(data, 3);
    FAIL("expected divergence");
  } catch (const TrainingDiverged& e) {
    const std::string what = e.what();
    CHECK(what.find("epoch 3") != std::string::npos);
    CHECK(what.find("lr") != std::string::npos);
  }
  CHECK_THROWS_AS(tr.train_epoch(std::span<const SequencePair>{}, 1), DataError);
}

TEST_CASE("epoch log JSON") {
  EpochLog e{7, 1.5, 1.25, 33.0, std::nullopt, true};
  const auto j = e.to_json();
  CHECK(j.at("val_so").is_null());
  CHECK(j.at("epoch") == 7);
  CHECK(EpochLog::from_json(j).val_loss == 1.25);
  e.val_so = 0.9;
  CHECK(EpochLog::from_json(e.to_json()).val_so == 0.9);
}

TEST_CASE("checkpoint round trip through a file") {
  testing::TempDir dir("ckpt");
  Trainer tr(small(1), 13, 17);
  tr.model().initialize(3);
  Checkpoint ck;
  ck.config = tr.config();
  ck.mode = TrainingMode::kTxt2Phn;
  ck.src_vocab_size = 13;
  ck.tgt_vocab_size = 17;
  ck.src_vocab_hash = "aaaa";
  ck.tgt_vocab_hash = "bbbb";
  ck.epoch = 5;
  ck.metrics = {{"val_bleu", 12.5}};
  ck.capture_params(tr.model());
  ck.save(dir / "m.ckpt");

  const auto back = Checkpoint::load(dir / "m.ckpt");
  CHECK(back.mode == TrainingMode::kTxt2Phn);
  CHECK(back.epoch == 5);
  CHECK(back.metrics == ck.metrics);
  CHECK(back.config.to_json() == ck.config.to_json());
  CHECK_FALSE(back.has_optimizer());
  const auto model = back.build_model();
  CHECK(same_params(*model, tr.model()));
  CHECK(back.serialize() == ck.serialize());

  CHECK_NOTHROW(back.verify("aaaa", "bbbb", ""));
  CHECK_THROWS_AS(back.verify("aaab", "bbbb", ""), DataError);
  CHECK_THROWS_AS(back.verify("aaaa", "bbbc", ""), DataError);
}

TEST_CASE("bin fingerprints are checked when the mode uses bins") {
  Checkpoint ck;
  ck.bins_hash = "1234";
  CHECK_NOTHROW(ck.verify("", "", "1234"));
  CHECK_THROWS_AS(ck.verify("", "", "9999"), DataError);
}

TEST_CASE("corrupt checkpoints are refused") {
  Trainer tr(small(1), 9, 9);
  tr.model().initialize(3);
  Checkpoint ck;
  ck.config = tr.config();
  ck.src_vocab_size = ck.tgt_vocab_size = 9;
  ck.capture_params(tr.model());
  const std::string bytes = ck.serialize();
  CHECK_THROWS_AS(Checkpoint::parse("NOTACKPT" + bytes.substr(8)), DataError);
  CHECK_THROWS_AS(Checkpoint::parse(bytes.substr(0, bytes.size() - 10)), DataError);
  CHECK_THROWS_AS(Checkpoint::parse(bytes.substr(0, 12)), DataError);

  // Shape mismatch on restore.
  Trainer other(small(1), 9, 11);
  CHECK_THROWS_AS(ck.restore_params(other.model()), DataError);
}

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

#ifndef ISODUB_CLI_PIPELINE_H_
#define ISODUB_CLI_PIPELINE_H_

// Subcommand implementations. Each takes explicit paths plus a RunConfig
// and writes artifacts that embed a provenance block (config + input
// content hashes). Line-oriented artifacts get a "<file>.provenance.json"
// sidecar instead.
//
// Prepared directory layout:
//   train.jsonl dev.jsonl test.jsonl    training records
//   bins.json                           duration bin boundaries
//   src.bpe src.vocab                   source BPE merges + vocabulary
//   tgt.bpe tgt.vocab                   target text (StdMT) BPE + vocabulary
//   phn.vocab                           phoneme/duration vocabulary
//   lexicon.txt word_counts.txt         p2w resources
//   stats.json stats.txt                pause statistics

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "isodub/binning/binning.h"
#include "isodub/cli/run_config.h"
#include "isodub/codec/bpe.h"
#include "isodub/codec/vocab.h"
#include "isodub/corpus/corpus.h"
#include "isodub/metrics/metrics.h"
#include "isodub/model/trainer.h"
#include "isodub/p2w/lexicon.h"
#include "json.hpp"

namespace isodub::cli {

namespace fs = std::filesystem;

inline constexpr const char* kToolVersion = "isodub 0.1.0";

nlohmann::json provenance(const char* command, const RunConfig& config, const std::vector<fs::path>& inputs);
void write_json_artifact(const fs::path& path, nlohmann::json body, const nlohmann::json& prov);
void write_lines_artifact(const fs::path& path, const std::string& content, const nlohmann::json& prov);

struct PrepareInputs {
  fs::path train;
  std::optional<fs::path> dev;
  std::optional<fs::path> test;
  std::optional<fs::path> lexicon;  // merged with pronunciations seen in training
};

struct PrepareResult {
  std::size_t train_records = 0;
  std::size_t dev_records = 0;
  std::size_t test_records = 0;
  std::size_t malformed = 0;
  int bins = 0;
  corpus::PauseStats stats;
  std::vector<std::string> warnings;
};

PrepareResult cmd_prepare(const PrepareInputs& inputs, const fs::path& out_dir, const RunConfig& config,
                          std::ostream& log);

// Everything cmd_prepare wrote, loaded back.
struct Prepared {
  fs::path dir;
  codec::BpeModel src_bpe;
  codec::Vocabulary src_vocab;
  codec::BpeModel tgt_bpe;
  codec::Vocabulary tgt_vocab;
  codec::Vocabulary phn_vocab;
  binning::BinBoundaries bins;
  p2w::PronLexicon lexicon;
  p2w::WordCounts counts;

  static Prepared load(const fs::path& dir);
  const codec::Vocabulary& target_vocab(model::TrainingMode mode) const;
  std::string bins_hash(model::TrainingMode mode) const;
};

// Source ids for a mode: text + DELIM + bins for TxtD2PhnD, text otherwise.
std::vector<int> encode_source_for(const Prepared& prep, model::TrainingMode mode, const std::string& text,
                                   std::span<const std::int64_t> seg_ms);
// Throws DataError when the record cannot be trained in this mode.
model::SequencePair make_example(const Prepared& prep, model::TrainingMode mode, const corpus::TrainingRecord& rec,
                                 int max_duration);

struct TrainResult {
  std::vector<model::EpochLog> logs;  // all epochs, including resumed ones
  int best_epoch = 0;
  double best_bleu = 0.0;
};

// Writes best.ckpt, last.ckpt (with optimizer state) and train_log.jsonl
// to out_dir. With resume, continues from out_dir/last.ckpt.
TrainResult cmd_train(const fs::path& prepared_dir, const fs::path& out_dir, const RunConfig& config, bool resume,
                      std::ostream& log);

struct Translation {
  std::string id;
  std::vector<std::string> words;
  std::vector<std::vector<std::string>> phones;
  std::vector<std::vector<int>> frames;
  std::optional<std::vector<std::int64_t>> seg_ms_pred;
  std::optional<std::vector<std::int64_t>> seg_ms_src;
  bool complete = true;
  int repairs = 0;

  nlohmann::json to_json() const;
  static Translation from_json(const nlohmann::json& j);
};

// Input rows: {"id", "text", "seg_ms": [...]} or {"id", "text", "wav":
// path relative to the input file}. Beam-decodes each row in order.
std::vector<Translation> cmd_translate(const fs::path& prepared_dir, const fs::path& checkpoint,
                                       const fs::path& input, const fs::path& output, const RunConfig& config,
                                       std::ostream& log);

struct SystemHypotheses {
  std::string name;
  fs::path path;
};

// References are training-record JSONL (the prepared test split). Hypothesis
// ids must match the reference ids exactly.
std::vector<metrics::EvalReport> cmd_evaluate(const std::vector<SystemHypotheses>& systems,
                                              const fs::path& references, const fs::path& out_json,
                                              const RunConfig& config, std::ostream& log);

// Segments (and bins when a bins file is given) for a WAV file.
nlohmann::json cmd_vad(const fs::path& wav, const std::optional<fs::path>& bins, const fs::path& output,
                       const RunConfig& config, std::ostream& log);

// Pause statistics of an alignment file over several thresholds.
nlohmann::json cmd_analyze(const fs::path& alignments, const std::vector<std::int64_t>& thresholds_ms,
                           const std::optional<fs::path>& output, const RunConfig& config, std::ostream& log);

}  // namespace isodub::cli

#endif  // ISODUB_CLI_PIPELINE_H_

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


#ifndef ISODUB_TESTS_PIPELINE_RUN_H_
#define ISODUB_TESTS_PIPELINE_RUN_H_

#include <filesystem>
#include <sstream>
#include <string>

#include "isodub/cli/pipeline.h"
#include "isodub/cli/run_config.h"
#include "isodub/cli/toy_corpus.h"

namespace isodub::testing {

struct PipelineOutputs {
  std::filesystem::path hypotheses;
  std::filesystem::path report;
  cli::TrainResult train;
};

// synth -> prepare -> train -> translate -> evaluate under `root`.
inline PipelineOutputs run_pipeline(const std::filesystem::path& root, const cli::ToyCorpusSpec& toy,
                                    const cli::RunConfig& config) {
  std::ostringstream log;
  const auto data = root / "toy";
  cli::write_toy_corpus(cli::generate_toy_corpus(toy), data);
  cli::PrepareInputs in;
  in.train = data / "train.align.jsonl";
  in.dev = data / "dev.align.jsonl";
  in.test = data / "test.align.jsonl";
  cli::cmd_prepare(in, root / "prep", config, log);
  PipelineOutputs out;
  out.train = cli::cmd_train(root / "prep", root / "model", config, false, log);
  out.hypotheses = root / "hyp.jsonl";
  cli::cmd_translate(root / "prep", root / "model" / "best.ckpt", data / "test_input.jsonl", out.hypotheses, config,
                     log);
  out.report = root / "report.json";
  cli::cmd_evaluate({{config.system.empty() ? "sys" : config.system, out.hypotheses}}, root / "prep" / "test.jsonl",
                    out.report, config, log);
  return out;
}

}  // namespace isodub::testing

#endif  // ISODUB_TESTS_PIPELINE_RUN_H_

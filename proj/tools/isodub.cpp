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

// isodub: prepare | train | translate | evaluate | vad | analyze | synth
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isodub/cli/pipeline.h"
#include "isodub/cli/run_config.h"
#include "isodub/cli/toy_corpus.h"
#include "isodub/common/error.h"

namespace {

using isodub::cli::RunConfig;

struct GlobalFlags {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<double> sigma;
  std::optional<int> bins;
  std::optional<int> frame_ms;
  std::vector<std::string> overrides;

  // Config file first, then --set pairs, then the dedicated flags.
  RunConfig resolve() const {
    RunConfig c;
    if (!config_file.empty()) c.apply_file(config_file);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw isodub::UsageError("--set expects key=value, got '" + kv + "'");
      c.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) c.seed = *seed;
    if (mode) c.set("mode", *mode);
    if (sigma) c.noise.sigma = *sigma;
    if (bins) c.bins = *bins;
    if (frame_ms) c.frame_ms = *frame_ms;
    c.finalize();
    return c;
  }
};

void add_globals(CLI::App& app, GlobalFlags& g) {
  app.add_option("--config", g.config_file, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "root seed");
  app.add_option("--mode", g.mode, "StdMT | Txt2Phn | TxtD2PhnD");
  app.add_option("--sigma", g.sigma, "relative duration noise");
  app.add_option("--bins", g.bins, "number of duration bins");
  app.add_option("--frame-ms", g.frame_ms, "duration frame in ms");
  app.add_option("--set", g.overrides, "config override key=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  CLI::App app{"isodub: duration-controlled translation for automatic dubbing"};
  app.require_subcommand(1);
  GlobalFlags g;

  isodub::cli::PrepareInputs prep_in;
  std::string prep_dev, prep_test, prep_lex, prep_out;
  auto* prepare = app.add_subcommand("prepare", "alignments -> records, bins, vocabularies");
  prepare->add_option("--train", prep_in.train, "training alignments (JSONL)")->required()->check(CLI::ExistingFile);
  prepare->add_option("--dev", prep_dev, "dev alignments")->check(CLI::ExistingFile);
  prepare->add_option("--test", prep_test, "test alignments")->check(CLI::ExistingFile);
  prepare->add_option("--lexicon", prep_lex, "extra pronunciation lexicon")->check(CLI::ExistingFile);
  prepare->add_option("--out", prep_out, "output directory")->required();
  add_globals(*prepare, g);

  std::string data_dir, train_out;
  bool resume = false;
  auto* train = app.add_subcommand("train", "train a model on prepared data");
  train->add_option("--data", data_dir, "prepared directory")->required()->check(CLI::ExistingDirectory);
  train->add_option("--out", train_out, "checkpoint directory")->required();
  train->add_flag("--resume", resume, "continue from <out>/last.ckpt");
  add_globals(*train, g);

  std::string ck_path, tr_input, tr_out;
  auto* translate = app.add_subcommand("translate", "beam-decode source rows");
  translate->add_option("--data", data_dir, "prepared directory")->required()->check(CLI::ExistingDirectory);
  translate->add_option("--checkpoint", ck_path, "checkpoint file")->required()->check(CLI::ExistingFile);
  translate->add_option("--input", tr_input, "input JSONL")->required()->check(CLI::ExistingFile);
  translate->add_option("--out", tr_out, "hypotheses JSONL")->required();
  add_globals(*translate, g);

  std::string refs, eval_out;
  std::vector<std::string> hyp_specs;
  auto* evaluate = app.add_subcommand("evaluate", "BLEU / speech overlap report");
  evaluate->add_option("--refs", refs, "reference records JSONL")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--hyp", hyp_specs, "NAME=PATH or PATH (repeatable)")->required();
  evaluate->add_option("--out", eval_out, "report JSON; a .txt table is written next to it")->required();
  add_globals(*evaluate, g);

  std::string wav, vad_bins, vad_out;
  auto* vad = app.add_subcommand("vad", "speech segments of a WAV file");
  vad->add_option("--wav", wav, "PCM 16-bit mono WAV")->required()->check(CLI::ExistingFile);
  vad->add_option("--bins-file", vad_bins, "bins.json to map segments to bin tokens")->check(CLI::ExistingFile);
  vad->add_option("--out", vad_out, "segments JSON")->required();
  add_globals(*vad, g);

  std::string an_in, an_out;
  std::vector<std::int64_t> thresholds;
  auto* analyze = app.add_subcommand("analyze", "pause statistics over thresholds");
  analyze->add_option("--alignments", an_in, "alignments JSONL")->required()->check(CLI::ExistingFile);
  analyze->add_option("--threshold", thresholds, "pause threshold(s) in ms (default 300)");
  analyze->add_option("--out", an_out, "JSON output");
  add_globals(*analyze, g);

  isodub::cli::ToyCorpusSpec toy;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "generate the synthetic toy corpus");
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--pairs", toy.train, "training pairs");
  synth->add_option("--dev-pairs", toy.dev, "dev pairs");
  synth->add_option("--test-pairs", toy.test, "test pairs");
  synth->add_option("--toy-seed", toy.seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*prepare) {
      if (!prep_dev.empty()) prep_in.dev = prep_dev;
      if (!prep_test.empty()) prep_in.test = prep_test;
      if (!prep_lex.empty()) prep_in.lexicon = prep_lex;
      const auto r = isodub::cli::cmd_prepare(prep_in, prep_out, g.resolve(), std::cerr);
      std::cout << r.train_records << " train / " << r.dev_records << " dev / " << r.test_records
                << " test records, " << r.malformed << " malformed, " << r.bins << " bins\n";
    } else if (*train) {
      const auto r = isodub::cli::cmd_train(data_dir, train_out, g.resolve(), resume, std::cerr);
      std::cout << "best epoch " << r.best_epoch << " (dev BLEU " << r.best_bleu << ")\n";
    } else if (*translate) {
      isodub::cli::cmd_translate(data_dir, ck_path, tr_input, tr_out, g.resolve(), std::cerr);
    } else if (*evaluate) {
      std::vector<isodub::cli::SystemHypotheses> systems;
      for (const auto& spec : hyp_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
          systems.push_back({fs::path(spec).stem().string(), spec});
        else
          systems.push_back({spec.substr(0, eq), spec.substr(eq + 1)});
        if (!fs::exists(systems.back().path))
          throw isodub::UsageError("hypothesis file not found: " + systems.back().path.string());
      }
      isodub::cli::cmd_evaluate(systems, refs, eval_out, g.resolve(), std::cout);
    } else if (*vad) {
      std::optional<fs::path> b;
      if (!vad_bins.empty()) b = vad_bins;
      const auto j = isodub::cli::cmd_vad(wav, b, vad_out, g.resolve(), std::cerr);
      std::cout << j["segments"].dump() << "\n";
    } else if (*analyze) {
      if (thresholds.empty()) thresholds.push_back(300);
      std::optional<fs::path> o;
      if (!an_out.empty()) o = an_out;
      isodub::cli::cmd_analyze(an_in, thresholds, o, g.resolve(), std::cout);
    } else if (*synth) {
      isodub::cli::write_toy_corpus(isodub::cli::generate_toy_corpus(toy), synth_out);
      std::cout << "wrote toy corpus to " << synth_out << "\n";
    }
  } catch (const isodub::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const isodub::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

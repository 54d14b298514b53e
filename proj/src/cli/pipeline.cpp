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

#include "isodub/cli/pipeline.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "isodub/codec/sequence.h"
#include "isodub/common/error.h"
#include "isodub/common/hash.h"
#include "isodub/common/io.h"
#include "isodub/model/beam.h"
#include "isodub/model/checkpoint.h"
#include "isodub/noise/noise.h"
#include "isodub/vad/vad.h"
#include "isodub/vad/wav.h"

namespace isodub::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Provenance

json provenance(const char* command, const RunConfig& config, const std::vector<fs::path>& inputs) {
  json in = json::array();
  for (const auto& p : inputs) in.push_back({{"name", p.filename().string()}, {"fnv1a64", hash_file(p)}});
  return {{"tool", kToolVersion}, {"command", command}, {"config", config.to_json()}, {"inputs", in}};
}

void write_json_artifact(const fs::path& path, json body, const json& prov) {
  body["provenance"] = prov;
  write_file(path, body.dump(2) + "\n");
}

void write_lines_artifact(const fs::path& path, const std::string& content, const json& prov) {
  write_file(path, content);
  json side = prov;
  side["artifact"] = {{"name", path.filename().string()}, {"fnv1a64", hex64(fnv1a64(content))}};
  write_file(fs::path(path.string() + ".provenance.json"), side.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// prepare

namespace {

struct ParsedSplit {
  std::vector<corpus::AlignedUtterance> utterances;
  std::vector<corpus::TrainingRecord> records;
  std::size_t lines = 0;
  std::size_t malformed = 0;
};

ParsedSplit parse_split(const fs::path& path, const RunConfig& config, const codec::Vocabulary& phn,
                        std::ostream& log) {
  ParsedSplit out;
  std::size_t line_no = 0;
  std::set<std::string> ids;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++out.lines;
    try {
      auto utt = corpus::parse_alignment_line(line);
      corpus::validate(utt);
      for (const auto& p : utt.phones)
        if (!phn.find(p.label)) throw DataError("phoneme '" + p.label + "' is not in the ARPAbet inventory");
      if (!ids.insert(utt.id).second) throw DataError("duplicate id '" + utt.id + "'");
      const auto segments = corpus::segment_utterance(utt, config.pause_ms);
      out.records.push_back(corpus::build_training_record(utt, segments, config.frame_ms));
      out.utterances.push_back(std::move(utt));
    } catch (const DataError& e) {
      ++out.malformed;
      log << path.string() << ":" << line_no << ": " << e.what() << "\n";
    }
  }
  if (out.lines == 0) throw DataError(path.string() + ": no alignment lines");
  if (static_cast<double>(out.malformed) > config.max_malformed * static_cast<double>(out.lines))
    throw DataError(path.string() + ": " + std::to_string(out.malformed) + " of " + std::to_string(out.lines) +
                    " lines malformed (limit " + std::to_string(config.max_malformed * 100.0) + "%)");
  return out;
}

codec::BpeModel train_bpe(const std::vector<std::string>& lines, int vocab_size, const char* side,
                          std::vector<std::string>& warnings, std::ostream& log) {
  std::set<std::string> chars;
  for (const auto& l : lines)
    for (const auto& w : split_whitespace(l))
      for (const auto& c : codec::split_characters(w)) chars.insert(c);
  // Each character also appears with the end-of-word marker.
  std::size_t size = static_cast<std::size_t>(vocab_size);
  if (size < 2 * chars.size()) {
    size = 2 * chars.size();
    warnings.push_back(std::string(side) + " BPE vocabulary raised to " + std::to_string(size) +
                       " to cover the character inventory");
    log << "warning: " << warnings.back() << "\n";
  }
  return codec::BpeModel::train(lines, size);
}

std::string text_of(const std::vector<std::string>& words) { return join(words, " "); }

}  // namespace

PrepareResult cmd_prepare(const PrepareInputs& inputs, const fs::path& out_dir, const RunConfig& config,
                          std::ostream& log) {
  PrepareResult result;
  const codec::Vocabulary phn = codec::make_phoneme_vocab(config.max_duration);
  ParsedSplit train = parse_split(inputs.train, config, phn, log);
  std::optional<ParsedSplit> dev, test;
  if (inputs.dev) dev = parse_split(*inputs.dev, config, phn, log);
  if (inputs.test) test = parse_split(*inputs.test, config, phn, log);
  result.malformed = train.malformed + (dev ? dev->malformed : 0) + (test ? test->malformed : 0);
  if (train.records.empty()) throw DataError("no usable training records");

  std::vector<std::int64_t> durations;
  for (const auto& r : train.records)
    durations.insert(durations.end(), r.segment_durations_ms.begin(), r.segment_durations_ms.end());
  int k = config.bins;
  if (durations.size() < static_cast<std::size_t>(k)) {
    if (durations.size() < 2) throw DataError("need at least two training segments to fit duration bins");
    k = static_cast<int>(durations.size());
    result.warnings.push_back("only " + std::to_string(durations.size()) + " training segments; using " +
                              std::to_string(k) + " bins instead of " + std::to_string(config.bins));
    log << "warning: " << result.warnings.back() << "\n";
  }
  const binning::BinBoundaries bins = binning::fit_bins(durations, k);
  result.bins = k;

  std::vector<std::string> src_lines, tgt_lines;
  for (const auto& r : train.records) {
    src_lines.push_back(r.source_text);
    tgt_lines.push_back(text_of(r.target_words));
  }
  const codec::BpeModel src_bpe = train_bpe(src_lines, config.bpe_vocab, "source", result.warnings, log);
  const codec::BpeModel tgt_bpe = train_bpe(tgt_lines, config.bpe_vocab, "target", result.warnings, log);
  codec::Vocabulary src_vocab = src_bpe.make_vocab();
  for (int i = 0; i < k; ++i) src_vocab.add(binning::bin_token(i, k));
  const codec::Vocabulary tgt_vocab = tgt_bpe.make_vocab();

  p2w::PronLexicon lexicon;
  if (inputs.lexicon) lexicon = p2w::PronLexicon::load(*inputs.lexicon);
  for (const auto& utt : train.utterances) {
    std::vector<p2w::Pronunciation> prons(utt.target_words.size());
    for (const auto& p : utt.phones) prons[static_cast<std::size_t>(p.word_idx)].push_back(p.label);
    for (std::size_t w = 0; w < prons.size(); ++w) lexicon.add(utt.target_words[w], prons[w]);
  }
  const p2w::WordCounts counts = p2w::count_words(train.records);
  result.stats = corpus::corpus_stats(train.records);

  std::vector<fs::path> in{inputs.train};
  if (inputs.dev) in.push_back(*inputs.dev);
  if (inputs.test) in.push_back(*inputs.test);
  if (inputs.lexicon) in.push_back(*inputs.lexicon);
  const json prov = provenance("prepare", config, in);

  fs::create_directories(out_dir);
  write_lines_artifact(out_dir / "train.jsonl", corpus::records_to_jsonl(train.records), prov);
  if (dev) write_lines_artifact(out_dir / "dev.jsonl", corpus::records_to_jsonl(dev->records), prov);
  if (test) write_lines_artifact(out_dir / "test.jsonl", corpus::records_to_jsonl(test->records), prov);
  json bins_json = binning::to_json(bins);
  bins_json["frame_ms"] = config.frame_ms;
  write_json_artifact(out_dir / "bins.json", bins_json, prov);
  write_lines_artifact(out_dir / "src.bpe", src_bpe.serialize(), prov);
  write_lines_artifact(out_dir / "src.vocab", src_vocab.serialize(), prov);
  write_lines_artifact(out_dir / "tgt.bpe", tgt_bpe.serialize(), prov);
  write_lines_artifact(out_dir / "tgt.vocab", tgt_vocab.serialize(), prov);
  write_lines_artifact(out_dir / "phn.vocab", phn.serialize(), prov);
  write_lines_artifact(out_dir / "lexicon.txt", lexicon.serialize(), prov);
  write_lines_artifact(out_dir / "word_counts.txt", p2w::serialize_counts(counts), prov);
  write_json_artifact(out_dir / "stats.json",
                      {{"samples", result.stats.samples},
                       {"one_plus", result.stats.one_plus},
                       {"two_plus", result.stats.two_plus},
                       {"pct_one_plus", result.stats.pct_one_plus()},
                       {"pct_two_plus", result.stats.pct_two_plus()},
                       {"pause_ms", config.pause_ms},
                       {"malformed", result.malformed},
                       {"warnings", result.warnings}},
                      prov);
  write_file(out_dir / "stats.txt", result.stats.table());

  result.train_records = train.records.size();
  result.dev_records = dev ? dev->records.size() : 0;
  result.test_records = test ? test->records.size() : 0;
  log << result.stats.table();
  return result;
}

// ---------------------------------------------------------------------------
// Prepared artifacts

Prepared Prepared::load(const fs::path& dir) {
  Prepared p;
  p.dir = dir;
  p.src_bpe = codec::BpeModel::load(dir / "src.bpe");
  p.src_vocab = codec::Vocabulary::load(dir / "src.vocab", codec::VocabKind::kTextBpe);
  p.tgt_bpe = codec::BpeModel::load(dir / "tgt.bpe");
  p.tgt_vocab = codec::Vocabulary::load(dir / "tgt.vocab", codec::VocabKind::kTextBpe);
  p.phn_vocab = codec::Vocabulary::load(dir / "phn.vocab", codec::VocabKind::kPhonemeClosed);
  try {
    p.bins = binning::bins_from_json(json::parse(read_file(dir / "bins.json")));
  } catch (const json::exception& e) {
    throw DataError((dir / "bins.json").string() + ": " + e.what());
  }
  p.lexicon = p2w::PronLexicon::load(dir / "lexicon.txt");
  p.counts = p2w::parse_counts(read_file(dir / "word_counts.txt"));
  return p;
}

const codec::Vocabulary& Prepared::target_vocab(model::TrainingMode mode) const {
  return model::mode_emits_phones(mode) ? phn_vocab : tgt_vocab;
}

std::string Prepared::bins_hash(model::TrainingMode mode) const {
  return model::mode_uses_bins(mode) ? binning::fingerprint(bins) : std::string();
}

std::vector<int> encode_source_for(const Prepared& prep, model::TrainingMode mode, const std::string& text,
                                   std::span<const std::int64_t> seg_ms) {
  if (!model::mode_uses_bins(mode)) return codec::encode_text(text, prep.src_bpe, prep.src_vocab);
  if (seg_ms.empty()) throw DataError("TxtD2PhnD needs segment durations for every input");
  std::vector<int> bins;
  for (const auto d : seg_ms) bins.push_back(binning::assign_bin(static_cast<double>(d), prep.bins));
  return codec::encode_source(text, bins, prep.src_bpe, prep.src_vocab);
}

model::SequencePair make_example(const Prepared& prep, model::TrainingMode mode, const corpus::TrainingRecord& rec,
                                 int max_duration) {
  model::SequencePair pair;
  pair.src = encode_source_for(prep, mode, rec.source_text, rec.segment_durations_ms);
  model::check_source_contract(pair.src, mode, codec::Vocabulary::kDelim);
  if (model::mode_emits_phones(mode)) {
    if (rec.target_phones.empty())
      throw DataError("record " + rec.id + " has no target phonemes for mode " +
                      std::string(model::mode_name(mode)));
    pair.tgt = codec::encode_target(rec, prep.phn_vocab, max_duration);
  } else {
    if (rec.target_words.empty()) throw DataError("record " + rec.id + " has no target words for StdMT");
    pair.tgt = codec::encode_text(text_of(rec.target_words), prep.tgt_bpe, prep.tgt_vocab);
  }
  return pair;
}

// ---------------------------------------------------------------------------
// Decoding helpers shared by validation and translate

namespace {

struct DecodedOutput {
  std::vector<std::string> words;
  std::vector<std::vector<std::string>> phones;
  std::vector<std::vector<int>> frames;
  std::optional<std::vector<std::int64_t>> seg_ms;
  int repairs = 0;
};

DecodedOutput decode_output(const Prepared& prep, const p2w::PhonesToWords& p2w, model::TrainingMode mode,
                            std::span<const int> tokens, int frame_ms) {
  DecodedOutput out;
  if (!model::mode_emits_phones(mode)) {
    std::vector<std::string> pieces;
    for (const int id : tokens)
      if (!prep.tgt_vocab.is_special(id)) pieces.push_back(prep.tgt_vocab.token(id));
    out.words = split_whitespace(codec::BpeModel::detokenize(pieces));
    return out;
  }
  const codec::DecodedTarget target = codec::decode_target(tokens, prep.phn_vocab);
  out.words = p2w.words(target);
  for (const auto& w : target.words) {
    std::vector<std::string> ph;
    std::vector<int> fr;
    for (const auto& p : w.phones) {
      ph.push_back(p.phone);
      fr.push_back(p.frames);
    }
    out.phones.push_back(std::move(ph));
    out.frames.push_back(std::move(fr));
  }
  out.seg_ms = codec::render_timing(target, frame_ms);
  out.repairs = target.repairs.total();
  return out;
}

int prepared_frame_ms(const Prepared& prep, int fallback) {
  const json j = json::parse(read_file(prep.dir / "bins.json"));
  return j.value("frame_ms", fallback);
}

}  // namespace

// ---------------------------------------------------------------------------
// train

TrainResult cmd_train(const fs::path& prepared_dir, const fs::path& out_dir, const RunConfig& config_in,
                      bool resume, std::ostream& log) {
  RunConfig config = config_in;
  config.finalize();
  const Prepared prep = Prepared::load(prepared_dir);
  const model::TrainingMode mode = config.mode;
  const int frame_ms = prepared_frame_ms(prep, config.frame_ms);

  const auto train_records = corpus::read_records((prepared_dir / "train.jsonl").string());
  if (train_records.empty()) throw DataError("empty training set");
  std::vector<corpus::TrainingRecord> dev_records;
  if (fs::exists(prepared_dir / "dev.jsonl")) dev_records = corpus::read_records((prepared_dir / "dev.jsonl").string());
  if (dev_records.empty()) {
    log << "warning: no dev split; validating on training records\n";
    dev_records.assign(train_records.begin(),
                       train_records.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(
                                                   train_records.size(), config.val_samples ? config.val_samples : 200)));
  }

  const auto stream = noise::oversample_records(train_records, config.noise);
  std::vector<model::SequencePair> train, dev;
  train.reserve(stream.size());
  for (const auto& r : stream) train.push_back(make_example(prep, mode, r, config.max_duration));
  for (const auto& r : dev_records) dev.push_back(make_example(prep, mode, r, config.max_duration));

  const std::size_t n_val = config.val_samples ? std::min<std::size_t>(config.val_samples, dev_records.size())
                                               : dev_records.size();
  const p2w::PhonesToWords p2w(prep.lexicon, prep.counts);
  const model::Validator validator = [&](const model::Transformer<float>& m) {
    std::vector<metrics::EvalSample> samples;
    for (std::size_t i = 0; i < n_val; ++i) {
      const auto& rec = dev_records[i];
      const auto hyp = model::greedy_decode(m, dev[i].src, config.model.max_len, config.model.length_penalty);
      const auto out = decode_output(prep, p2w, mode, hyp.tokens, frame_ms);
      metrics::EvalSample s;
      s.id = rec.id;
      s.hypothesis = join(out.words, " ");
      s.reference = text_of(rec.target_words);
      s.src_segments_ms = rec.segment_durations_ms;
      s.dub_segments_ms = out.seg_ms;
      samples.push_back(std::move(s));
    }
    const auto report = metrics::evaluate("dev", samples);
    return model::ValidationScores{report.bleu, report.so};
  };

  model::Trainer trainer(config.model, prep.src_vocab.size(), prep.target_vocab(mode).size());
  const std::string src_hash = prep.src_vocab.fingerprint();
  const std::string tgt_hash = prep.target_vocab(mode).fingerprint();
  const std::string bins_hash = prep.bins_hash(mode);

  std::vector<fs::path> inputs{prepared_dir / "train.jsonl", prepared_dir / "src.vocab",
                               prepared_dir / "bins.json"};
  if (fs::exists(prepared_dir / "dev.jsonl")) inputs.push_back(prepared_dir / "dev.jsonl");
  const json prov = provenance("train", config, inputs);

  fs::create_directories(out_dir);
  const fs::path log_path = out_dir / "train_log.jsonl";
  std::vector<model::EpochLog> history;

  if (resume && fs::exists(out_dir / "last.ckpt")) {
    const auto last = model::Checkpoint::load(out_dir / "last.ckpt");
    last.verify(src_hash, tgt_hash, bins_hash);
    if (last.mode != mode) throw DataError("checkpoint was trained in mode " + std::string(model::mode_name(last.mode)));
    json cur = config.model.to_json(), old = last.config.to_json();
    cur.erase("max_epochs");
    old.erase("max_epochs");
    if (cur != old) throw UsageError("cannot resume: model configuration differs from the checkpoint");
    last.restore_params(trainer.model());
    if (last.has_optimizer()) last.restore_optimizer(trainer.optimizer(), trainer.model());
    trainer.set_completed_epochs(last.epoch);
    if (last.extra.contains("best") && fs::exists(out_dir / "best.ckpt")) {
      const auto& b = last.extra["best"];
      auto& best = trainer.best();
      best.epoch = b.at("epoch").get<int>();
      best.bleu = b.at("bleu").get<double>();
      best.val_loss = b.at("val_loss").get<double>();
      best.params = model::Checkpoint::load(out_dir / "best.ckpt").build_model()->snapshot();
    }
    if (fs::exists(log_path))
      for (const auto& line : read_lines(log_path)) {
        if (trim(line).empty()) continue;
        auto e = model::EpochLog::from_json(json::parse(line));
        if (e.epoch <= last.epoch) history.push_back(e);
      }
    for (auto& e : history) e.best = e.epoch == trainer.best().epoch;
    log << "resuming after epoch " << last.epoch << "\n";
  }

  auto make_checkpoint = [&](const model::Trainer& t, int epoch, const json& metrics) {
    model::Checkpoint ck;
    ck.config = config.model;
    ck.mode = mode;
    ck.src_vocab_size = prep.src_vocab.size();
    ck.tgt_vocab_size = prep.target_vocab(mode).size();
    ck.src_vocab_hash = src_hash;
    ck.tgt_vocab_hash = tgt_hash;
    ck.bins_hash = bins_hash;
    ck.epoch = epoch;
    ck.optimizer_steps = const_cast<model::Trainer&>(t).optimizer().steps();
    ck.metrics = metrics;
    ck.extra = {{"provenance", prov}, {"frame_ms", frame_ms}};
    return ck;
  };

  auto write_log = [&]() {
    std::string text;
    for (const auto& e : history) text += e.to_json().dump() + "\n";
    write_lines_artifact(log_path, text, prov);
  };

  const auto on_epoch = [&](const model::EpochLog& e, model::Trainer& t) {
    history.push_back(e);
    const json metrics = {{"val_bleu", e.val_bleu},
                          {"val_loss", e.val_loss},
                          {"val_so", e.val_so ? json(*e.val_so) : json(nullptr)}};
    if (e.best) {
      auto best = make_checkpoint(t, e.epoch, metrics);
      best.capture_params(t.model());
      best.save(out_dir / "best.ckpt");
    }
    auto last = make_checkpoint(t, e.epoch, metrics);
    last.capture_params(t.model());
    last.capture_optimizer(t.optimizer(), t.model());
    last.extra["best"] = {{"epoch", t.best().epoch}, {"bleu", t.best().bleu}, {"val_loss", t.best().val_loss}};
    last.save(out_dir / "last.ckpt");
    write_log();
    log << e.to_json().dump() << (e.best ? "  *" : "") << "\n";
  };

  trainer.fit(train, dev, validator, on_epoch);
  if (!fs::exists(out_dir / "best.ckpt")) {
    auto best = make_checkpoint(trainer, trainer.completed_epochs(), json::object());
    best.capture_params(trainer.model());
    best.save(out_dir / "best.ckpt");
    write_log();
  }

  TrainResult result;
  result.logs = history;
  result.best_epoch = trainer.best().epoch;
  result.best_bleu = std::isfinite(trainer.best().bleu) ? trainer.best().bleu : 0.0;
  return result;
}

// ---------------------------------------------------------------------------
// translate

json Translation::to_json() const {
  auto opt = [](const std::optional<std::vector<std::int64_t>>& v) { return v ? json(*v) : json(nullptr); };
  return {{"id", id},           {"words", words},   {"phones", phones},
          {"frames", frames},   {"seg_ms_pred", opt(seg_ms_pred)},
          {"seg_ms_src", opt(seg_ms_src)}, {"complete", complete}, {"repairs", repairs}};
}

Translation Translation::from_json(const json& j) {
  Translation t;
  try {
    t.id = j.at("id").get<std::string>();
    t.words = j.at("words").get<std::vector<std::string>>();
    t.phones = j.value("phones", std::vector<std::vector<std::string>>{});
    t.frames = j.value("frames", std::vector<std::vector<int>>{});
    if (j.contains("seg_ms_pred") && !j["seg_ms_pred"].is_null())
      t.seg_ms_pred = j["seg_ms_pred"].get<std::vector<std::int64_t>>();
    if (j.contains("seg_ms_src") && !j["seg_ms_src"].is_null())
      t.seg_ms_src = j["seg_ms_src"].get<std::vector<std::int64_t>>();
    t.complete = j.value("complete", true);
    t.repairs = j.value("repairs", 0);
  } catch (const json::exception& e) {
    throw DataError(std::string("hypothesis row: ") + e.what());
  }
  return t;
}

std::vector<Translation> cmd_translate(const fs::path& prepared_dir, const fs::path& checkpoint,
                                       const fs::path& input, const fs::path& output, const RunConfig& config_in,
                                       std::ostream& log) {
  RunConfig config = config_in;
  config.finalize();
  const Prepared prep = Prepared::load(prepared_dir);
  const auto ck = model::Checkpoint::load(checkpoint);
  const model::TrainingMode mode = ck.mode;
  ck.verify(prep.src_vocab.fingerprint(), prep.target_vocab(mode).fingerprint(), prep.bins_hash(mode));
  const auto model = ck.build_model();
  const int frame_ms = ck.extra.value("frame_ms", config.frame_ms);
  const p2w::PhonesToWords p2w(prep.lexicon, prep.counts);

  std::vector<Translation> rows;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(input)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = input.string() + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(where + ": " + e.what());
    }
    Translation t;
    std::string text;
    try {
      t.id = j.at("id").get<std::string>();
      text = j.contains("text") ? j.at("text").get<std::string>() : j.at("src").get<std::string>();
      if (j.contains("seg_ms")) {
        t.seg_ms_src = j.at("seg_ms").get<std::vector<std::int64_t>>();
      } else if (j.contains("wav")) {
        fs::path wav = j.at("wav").get<std::string>();
        if (wav.is_relative()) wav = input.parent_path() / wav;
        const auto audio = vad::read_wav(wav);
        const auto segs = vad::detect_segments(audio.samples, audio.rate_hz, config.vad);
        if (segs.empty()) throw DataError("no speech found in " + wav.string());
        t.seg_ms_src = vad::segment_durations(segs);
      }
    } catch (const json::exception& e) {
      throw DataError(where + ": " + e.what());
    }
    std::span<const std::int64_t> seg;
    if (t.seg_ms_src) seg = *t.seg_ms_src;
    std::vector<int> src;
    try {
      src = encode_source_for(prep, mode, text, seg);
    } catch (const DataError& e) {
      throw DataError(where + " (" + t.id + "): " + e.what());
    }
    const auto hyp = model::beam_decode(*model, src, config.model.beam, config.model.max_len,
                                        config.model.length_penalty);
    if (!hyp.complete) log << "warning: " << t.id << ": reached max_len " << config.model.max_len << " without EOS\n";
    auto out = decode_output(prep, p2w, mode, hyp.tokens, frame_ms);
    t.words = std::move(out.words);
    t.phones = std::move(out.phones);
    t.frames = std::move(out.frames);
    t.seg_ms_pred = std::move(out.seg_ms);
    t.complete = hyp.complete;
    t.repairs = out.repairs;
    rows.push_back(std::move(t));
  }

  std::string text;
  for (const auto& r : rows) text += r.to_json().dump() + "\n";
  write_lines_artifact(output, text, provenance("translate", config, {checkpoint, input}));
  log << "translated " << rows.size() << " rows\n";
  return rows;
}

// ---------------------------------------------------------------------------
// evaluate

std::vector<metrics::EvalReport> cmd_evaluate(const std::vector<SystemHypotheses>& systems,
                                              const fs::path& references, const fs::path& out_json,
                                              const RunConfig& config, std::ostream& log) {
  const auto refs = corpus::read_records(references.string());
  std::vector<fs::path> inputs{references};
  std::vector<metrics::EvalReport> reports;
  for (const auto& sys : systems) {
    inputs.push_back(sys.path);
    std::map<std::string, Translation> hyps;
    std::size_t line_no = 0;
    for (const auto& line : read_lines(sys.path)) {
      ++line_no;
      if (trim(line).empty()) continue;
      Translation t;
      try {
        t = Translation::from_json(json::parse(line));
      } catch (const json::exception& e) {
        throw DataError(sys.path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
      if (!hyps.emplace(t.id, t).second) throw DataError(sys.path.string() + ": duplicate id " + t.id);
    }
    std::vector<std::string> missing, unexpected;
    std::set<std::string> ref_ids;
    for (const auto& r : refs) {
      ref_ids.insert(r.id);
      if (!hyps.contains(r.id)) missing.push_back(r.id);
    }
    for (const auto& [id, _] : hyps)
      if (!ref_ids.contains(id)) unexpected.push_back(id);
    if (!missing.empty() || !unexpected.empty()) {
      std::string msg = sys.path.string() + ": ids do not match the references";
      if (!missing.empty()) msg += "; missing: " + join(missing, ", ");
      if (!unexpected.empty()) msg += "; unexpected: " + join(unexpected, ", ");
      throw DataError(msg);
    }
    std::vector<metrics::EvalSample> samples;
    for (const auto& r : refs) {
      const auto& h = hyps.at(r.id);
      metrics::EvalSample s;
      s.id = r.id;
      s.hypothesis = join(h.words, " ");
      s.reference = text_of(r.target_words);
      s.source_text = r.source_text;
      s.src_segments_ms = h.seg_ms_src ? *h.seg_ms_src : r.segment_durations_ms;
      s.dub_segments_ms = h.seg_ms_pred;
      samples.push_back(std::move(s));
    }
    reports.push_back(metrics::evaluate(sys.name, samples));
  }

  const std::string table = metrics::format_table(reports);
  json systems_json = json::array();
  for (const auto& r : reports) systems_json.push_back(r.to_json());
  const json prov = provenance("evaluate", config, inputs);
  write_json_artifact(out_json, {{"systems", systems_json}, {"table", table}}, prov);
  fs::path table_path = out_json;
  table_path.replace_extension(".txt");
  write_file(table_path, table);
  log << table;
  return reports;
}

// ---------------------------------------------------------------------------
// vad / analyze

json cmd_vad(const fs::path& wav, const std::optional<fs::path>& bins_path, const fs::path& output,
             const RunConfig& config, std::ostream& log) {
  const auto audio = vad::read_wav(wav);
  const auto segs = vad::detect_segments(audio.samples, audio.rate_hz, config.vad);
  json out = vad::segments_to_json(segs);
  std::vector<fs::path> inputs{wav};
  if (bins_path) {
    inputs.push_back(*bins_path);
    binning::BinBoundaries bins;
    try {
      bins = binning::bins_from_json(json::parse(read_file(*bins_path)));
    } catch (const json::exception& e) {
      throw DataError(bins_path->string() + ": " + e.what());
    }
    const auto idx = vad::segments_to_bins(segs, bins);
    json tokens = json::array();
    for (const int i : idx) tokens.push_back(binning::bin_token(i, bins.k));
    out["bins"] = idx;
    out["bin_tokens"] = tokens;
  }
  write_json_artifact(output, out, provenance("vad", config, inputs));
  log << segs.size() << " segment(s)\n";
  return out;
}

json cmd_analyze(const fs::path& alignments, const std::vector<std::int64_t>& thresholds_ms,
                 const std::optional<fs::path>& output, const RunConfig& config, std::ostream& log) {
  std::vector<corpus::AlignedUtterance> utts;
  std::size_t line_no = 0, malformed = 0;
  for (const auto& line : read_lines(alignments)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      auto u = corpus::parse_alignment_line(line);
      corpus::validate(u);
      utts.push_back(std::move(u));
    } catch (const DataError& e) {
      ++malformed;
      log << alignments.string() << ":" << line_no << ": " << e.what() << "\n";
    }
  }
  if (utts.empty()) throw DataError(alignments.string() + ": no valid utterances");
  json rows = json::array();
  for (const auto threshold : thresholds_ms) {
    corpus::PauseStats s;
    s.samples = utts.size();
    for (const auto& u : utts) {
      const auto pauses = corpus::detect_pauses(u.phones, threshold).size();
      s.one_plus += pauses >= 1;
      s.two_plus += pauses >= 2;
    }
    log << "pause threshold " << threshold << " ms\n" << s.table();
    rows.push_back({{"threshold_ms", threshold},
                    {"samples", s.samples},
                    {"one_plus", s.one_plus},
                    {"two_plus", s.two_plus},
                    {"pct_one_plus", s.pct_one_plus()},
                    {"pct_two_plus", s.pct_two_plus()}});
  }
  json out = {{"thresholds", rows}, {"malformed", malformed}};
  if (output) write_json_artifact(*output, out, provenance("analyze", config, {alignments}));
  return out;
}

}  // namespace isodub::cli

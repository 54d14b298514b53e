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

#include "isodub/model/checkpoint.h"

#include <cstring>

#include "isodub/common/error.h"
#include "isodub/common/io.h"

namespace isodub::model {

namespace {

constexpr char kMagic[8] = {'I', 'S', 'O', 'D', 'U', 'B', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

NamedTensor to_tensor(const std::string& name, const std::string& group, const Matrix<float>& m) {
  NamedTensor t;
  t.name = name;
  t.group = group;
  t.rows = m.rows();
  t.cols = m.cols();
  t.data.assign(m.data(), m.data() + m.size());
  return t;
}

const NamedTensor& find_tensor(const std::vector<NamedTensor>& tensors, const std::string& name,
                               const std::string& group) {
  for (const auto& t : tensors)
    if (t.name == name && t.group == group) return t;
  throw DataError("checkpoint lacks tensor " + group + ":" + name);
}

void copy_into(const NamedTensor& t, Matrix<float>& m) {
  if (t.rows != m.rows() || t.cols != m.cols())
    throw DataError("checkpoint tensor " + t.name + " has shape " + std::to_string(t.rows) + "x" +
                    std::to_string(t.cols) + ", model expects " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  std::memcpy(m.data(), t.data.data(), t.data.size() * sizeof(float));
}

}  // namespace

void Checkpoint::capture_params(const Transformer<float>& model) {
  std::erase_if(tensors, [](const NamedTensor& t) { return t.group == "param"; });
  for (std::size_t i = 0; i < model.params().size(); ++i)
    tensors.push_back(to_tensor(model.params()[i].name, "param", model.params()[i].value));
  config = model.config();
  src_vocab_size = model.src_vocab();
  tgt_vocab_size = model.tgt_vocab();
}

void Checkpoint::capture_optimizer(Adam<float>& adam, const Transformer<float>& model) {
  std::erase_if(tensors, [](const NamedTensor& t) { return t.group != "param"; });
  for (std::size_t i = 0; i < model.params().size(); ++i) {
    tensors.push_back(to_tensor(model.params()[i].name, "adam_m", adam.first_moments()[i]));
    tensors.push_back(to_tensor(model.params()[i].name, "adam_v", adam.second_moments()[i]));
  }
  optimizer_steps = adam.steps();
}

void Checkpoint::restore_params(Transformer<float>& model) const {
  for (std::size_t i = 0; i < model.params().size(); ++i) {
    auto& p = model.params()[i];
    copy_into(find_tensor(tensors, p.name, "param"), p.value);
  }
}

bool Checkpoint::has_optimizer() const {
  for (const auto& t : tensors)
    if (t.group == "adam_m") return true;
  return false;
}

void Checkpoint::restore_optimizer(Adam<float>& adam, const Transformer<float>& model) const {
  for (std::size_t i = 0; i < model.params().size(); ++i) {
    const auto& name = model.params()[i].name;
    copy_into(find_tensor(tensors, name, "adam_m"), adam.first_moments()[i]);
    copy_into(find_tensor(tensors, name, "adam_v"), adam.second_moments()[i]);
  }
  adam.set_steps(optimizer_steps);
}

std::unique_ptr<Transformer<float>> Checkpoint::build_model() const {
  auto model = std::make_unique<Transformer<float>>(config, src_vocab_size, tgt_vocab_size);
  restore_params(*model);
  return model;
}

std::string Checkpoint::serialize() const {
  nlohmann::json table = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& t : tensors) {
    table.push_back({{"name", t.name}, {"group", t.group}, {"shape", {t.rows, t.cols}}, {"offset", offset}});
    offset += t.data.size();
  }
  const nlohmann::json header = {{"format", "isodub-checkpoint"},
                                 {"config", config.to_json()},
                                 {"mode", std::string(mode_name(mode))},
                                 {"src_vocab_size", src_vocab_size},
                                 {"tgt_vocab_size", tgt_vocab_size},
                                 {"src_vocab_hash", src_vocab_hash},
                                 {"tgt_vocab_hash", tgt_vocab_hash},
                                 {"bins_hash", bins_hash},
                                 {"epoch", epoch},
                                 {"optimizer_steps", optimizer_steps},
                                 {"metrics", metrics},
                                 {"extra", extra},
                                 {"tensors", table}};
  const std::string h = header.dump();
  std::string out(kMagic, sizeof(kMagic));
  auto put = [&out](const void* p, std::size_t n) { out.append(static_cast<const char*>(p), n); };
  put(&kVersion, sizeof(kVersion));
  const std::uint64_t hlen = h.size();
  put(&hlen, sizeof(hlen));
  out += h;
  for (const auto& t : tensors) put(t.data.data(), t.data.size() * sizeof(float));
  return out;
}

Checkpoint Checkpoint::parse(const std::string& bytes) {
  const std::size_t prefix = sizeof(kMagic) + sizeof(std::uint32_t) + sizeof(std::uint64_t);
  if (bytes.size() < prefix || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw DataError("not an isodub checkpoint");
  std::uint32_t version = 0;
  std::uint64_t hlen = 0;
  std::memcpy(&version, bytes.data() + sizeof(kMagic), sizeof(version));
  std::memcpy(&hlen, bytes.data() + sizeof(kMagic) + sizeof(version), sizeof(hlen));
  if (version != kVersion) throw DataError("unsupported checkpoint version " + std::to_string(version));
  if (bytes.size() < prefix + hlen) throw DataError("truncated checkpoint header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(prefix, hlen));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint header: ") + e.what());
  }
  Checkpoint c;
  try {
    c.config = ModelConfig::from_json(header.at("config"));
    c.mode = parse_mode(header.at("mode").get<std::string>());
    c.src_vocab_size = header.at("src_vocab_size").get<int>();
    c.tgt_vocab_size = header.at("tgt_vocab_size").get<int>();
    c.src_vocab_hash = header.at("src_vocab_hash").get<std::string>();
    c.tgt_vocab_hash = header.at("tgt_vocab_hash").get<std::string>();
    c.bins_hash = header.at("bins_hash").get<std::string>();
    c.epoch = header.at("epoch").get<int>();
    c.optimizer_steps = header.at("optimizer_steps").get<std::int64_t>();
    c.metrics = header.at("metrics");
    c.extra = header.at("extra");
    const std::size_t data_start = prefix + hlen;
    for (const auto& e : header.at("tensors")) {
      NamedTensor t;
      t.name = e.at("name").get<std::string>();
      t.group = e.at("group").get<std::string>();
      t.rows = e.at("shape").at(0).get<Eigen::Index>();
      t.cols = e.at("shape").at(1).get<Eigen::Index>();
      const std::size_t off = e.at("offset").get<std::size_t>();
      const std::size_t n = static_cast<std::size_t>(t.rows * t.cols);
      if (data_start + (off + n) * sizeof(float) > bytes.size()) throw DataError("truncated checkpoint data");
      t.data.resize(n);
      std::memcpy(t.data.data(), bytes.data() + data_start + off * sizeof(float), n * sizeof(float));
      c.tensors.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint header: ") + e.what());
  }
  return c;
}

void Checkpoint::save(const std::filesystem::path& path) const { write_file(path, serialize()); }

Checkpoint Checkpoint::load(const std::filesystem::path& path) { return parse(read_file(path)); }

void Checkpoint::verify(const std::string& src_hash, const std::string& tgt_hash, const std::string& bins) const {
  if (src_hash != src_vocab_hash)
    throw DataError("source vocabulary fingerprint " + src_hash + " does not match checkpoint " + src_vocab_hash);
  if (tgt_hash != tgt_vocab_hash)
    throw DataError("target vocabulary fingerprint " + tgt_hash + " does not match checkpoint " + tgt_vocab_hash);
  if (!bins_hash.empty() && bins != bins_hash)
    throw DataError("bin boundaries fingerprint " + bins + " does not match checkpoint " + bins_hash);
}

}  // namespace isodub::model

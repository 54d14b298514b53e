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

#ifndef ISODUB_TESTS_FIXTURES_H_
#define ISODUB_TESTS_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "isodub/corpus/corpus.h"

namespace isodub::testing {

// Words given as (word, [(phone, duration_ms)...]) with a silence before
// each word (gap_before[0] is the leading silence).
struct FixtureWord {
  std::string word;
  std::vector<std::pair<std::string, std::int64_t>> phones;
  std::int64_t gap_before = 0;
};

inline corpus::AlignedUtterance make_utterance(const std::string& id, const std::vector<FixtureWord>& words,
                                               const std::string& source = "src") {
  corpus::AlignedUtterance u;
  u.id = id;
  u.source_text = source;
  std::int64_t t = 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    u.target_words.push_back(words[w].word);
    t += words[w].gap_before;
    for (const auto& [ph, d] : words[w].phones) {
      u.phones.push_back({ph, t, t + d, static_cast<int>(w)});
      t += d;
    }
  }
  return u;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("isodub-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace isodub::testing

#endif  // ISODUB_TESTS_FIXTURES_H_

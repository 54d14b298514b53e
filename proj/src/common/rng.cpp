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

#include "isodub/common/rng.h"

#include "isodub/common/hash.h"

namespace isodub {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t root_seed, std::string_view name,
                             std::initializer_list<std::uint64_t> indices) {
  std::uint64_t h = splitmix64(root_seed) ^ fnv1a64(name);
  h = splitmix64(h);
  for (std::uint64_t idx : indices) h = splitmix64(h ^ splitmix64(idx + 1));
  return h;
}

std::mt19937_64 substream(std::uint64_t root_seed, std::string_view name,
                          std::initializer_list<std::uint64_t> indices) {
  return std::mt19937_64(substream_seed(root_seed, name, indices));
}

}  // namespace isodub

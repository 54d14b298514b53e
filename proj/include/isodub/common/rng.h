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

#ifndef ISODUB_COMMON_RNG_H_
#define ISODUB_COMMON_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace isodub {

std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent generator from the root seed, a stream name
// ("shuffle", "noise", "init", "dropout", ...) and optional indices.
// The same arguments always give the same stream.
std::mt19937_64 substream(std::uint64_t root_seed, std::string_view name,
                          std::initializer_list<std::uint64_t> indices = {});

std::uint64_t substream_seed(std::uint64_t root_seed, std::string_view name,
                             std::initializer_list<std::uint64_t> indices = {});

}  // namespace isodub

#endif  // ISODUB_COMMON_RNG_H_

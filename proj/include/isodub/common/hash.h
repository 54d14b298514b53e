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

#ifndef ISODUB_COMMON_HASH_H_
#define ISODUB_COMMON_HASH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace isodub {

// 64-bit FNV-1a. Used for content hashes in provenance blocks and for the
// vocabulary/bin fingerprints stored in checkpoints.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t value);

// Hex FNV-1a of the file content. Throws UsageError if unreadable.
std::string hash_file(const std::filesystem::path& path);

}  // namespace isodub

#endif  // ISODUB_COMMON_HASH_H_

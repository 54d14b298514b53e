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

#ifndef ISODUB_COMMON_IO_H_
#define ISODUB_COMMON_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace isodub {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::vector<std::string> split_whitespace(std::string_view text);
std::vector<std::string> split_lines(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string trim(std::string_view text);

// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

}  // namespace isodub

#endif  // ISODUB_COMMON_IO_H_

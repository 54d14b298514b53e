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

#ifndef ISODUB_COMMON_ERROR_H_
#define ISODUB_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace isodub {

// Input data that cannot be used (bad records, hash mismatches). Maps to
// exit code 2 in the command-line tool.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that breaks an ordering or overlap invariant.
class StructuralError : public DataError {
 public:
  using DataError::DataError;
};

// Bad flags, unknown config keys, missing files. Exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace isodub

#endif  // ISODUB_COMMON_ERROR_H_

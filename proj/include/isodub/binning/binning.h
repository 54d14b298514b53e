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

#ifndef ISODUB_BINNING_BINNING_H_
#define ISODUB_BINNING_BINNING_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace isodub::binning {

inline constexpr int kDefaultBins = 100;

// Equal-frequency bins over segment durations. Bin i holds durations d with
// cuts[i-1] < d <= cuts[i]; the first and last bins are open-ended.
struct BinBoundaries {
  int k = kDefaultBins;
  std::vector<double> cuts;  // ms
  std::size_t fitted_on = 0;

  // Bins reachable by assign_bin (cuts.size() + 1), which can be fewer than
  // k after tied quantiles collapse.
  int effective_bins() const { return static_cast<int>(cuts.size()) + 1; }
  bool operator==(const BinBoundaries&) const = default;
};

// Cut i is the lower empirical quantile at i/k: the ceil(i*n/k)-th smallest
// sample. Duplicate cuts and cuts at the sample maximum are dropped.
BinBoundaries fit_bins(std::span<const std::int64_t> durations_ms, int k);
BinBoundaries fit_bins(std::span<const double> durations_ms, int k);

int assign_bin(double duration_ms, const BinBoundaries& bins);

// "BIN{i}"; throws std::out_of_range unless 0 <= i < k.
std::string bin_token(int index, int k);

nlohmann::json to_json(const BinBoundaries& b);
BinBoundaries bins_from_json(const nlohmann::json& j);
std::string fingerprint(const BinBoundaries& b);

}  // namespace isodub::binning

#endif  // ISODUB_BINNING_BINNING_H_

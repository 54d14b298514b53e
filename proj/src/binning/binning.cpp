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

#include "isodub/binning/binning.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isodub/common/error.h"
#include "isodub/common/hash.h"

namespace isodub::binning {

BinBoundaries fit_bins(std::span<const double> durations_ms, int k) {
  if (k < 2) throw DataError("fit_bins: k must be at least 2");
  if (durations_ms.size() < static_cast<std::size_t>(k))
    throw DataError("fit_bins: " + std::to_string(durations_ms.size()) +
                    " samples cannot fill " + std::to_string(k) + " bins");
  std::vector<double> sorted(durations_ms.begin(), durations_ms.end());
  if (!std::all_of(sorted.begin(), sorted.end(), [](double d) { return std::isfinite(d); }))
    throw DataError("fit_bins: durations must be finite");
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const auto kk = static_cast<std::size_t>(k);

  BinBoundaries b;
  b.k = k;
  b.fitted_on = n;
  for (std::size_t i = 1; i < kk; ++i) {
    const std::size_t rank = (i * n + kk - 1) / kk;  // ceil(i*n/k), 1-based
    const double cut = sorted[rank - 1];
    if (cut >= sorted.back()) break;
    if (b.cuts.empty() || cut > b.cuts.back()) b.cuts.push_back(cut);
  }
  return b;
}

BinBoundaries fit_bins(std::span<const std::int64_t> durations_ms, int k) {
  const std::vector<double> as_double(durations_ms.begin(), durations_ms.end());
  return fit_bins(std::span<const double>(as_double), k);
}

int assign_bin(double duration_ms, const BinBoundaries& bins) {
  const auto it = std::lower_bound(bins.cuts.begin(), bins.cuts.end(), duration_ms);
  return static_cast<int>(it - bins.cuts.begin());
}

std::string bin_token(int index, int k) {
  if (index < 0 || index >= k)
    throw std::out_of_range("bin index " + std::to_string(index) + " outside [0, " + std::to_string(k) + ")");
  return "BIN" + std::to_string(index);
}

nlohmann::json to_json(const BinBoundaries& b) {
  return {{"k", b.k}, {"cuts_ms", b.cuts}, {"fitted_on", b.fitted_on}};
}

BinBoundaries bins_from_json(const nlohmann::json& j) {
  BinBoundaries b;
  try {
    b.k = j.at("k").get<int>();
    b.cuts = j.at("cuts_ms").get<std::vector<double>>();
    b.fitted_on = j.at("fitted_on").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bin boundaries: ") + e.what());
  }
  if (b.k < 2 || b.cuts.size() + 1 > static_cast<std::size_t>(b.k) ||
      !std::is_sorted(b.cuts.begin(), b.cuts.end()) ||
      std::adjacent_find(b.cuts.begin(), b.cuts.end()) != b.cuts.end())
    throw DataError("bin boundaries: cuts must be strictly ascending and fewer than k");
  return b;
}

std::string fingerprint(const BinBoundaries& b) {
  return hex64(fnv1a64(nlohmann::json{{"k", b.k}, {"cuts_ms", b.cuts}}.dump()));
}

}  // namespace isodub::binning

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


#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "isodub/binning/binning.h"
#include "isodub/common/error.h"

using namespace isodub;
using namespace isodub::binning;

namespace {

// Counts per bin computed straight from the cut list, without assign_bin.
std::vector<int> histogram(const std::vector<double>& data, const BinBoundaries& b) {
  std::vector<int> counts(b.effective_bins(), 0);
  for (const double d : data) {
    int i = 0;
    while (i < static_cast<int>(b.cuts.size()) && d > b.cuts[i]) ++i;
    ++counts[i];
  }
  return counts;
}

}  // namespace

TEST_CASE("durations 1..100 into four bins") {
  std::vector<std::int64_t> d(100);
  std::iota(d.begin(), d.end(), 1);
  const auto b = fit_bins(d, 4);
  CHECK(b.k == 4);
  CHECK(b.fitted_on == 100);
  CHECK(b.cuts == std::vector<double>{25, 50, 75});
  std::vector<int> counts(4, 0);
  for (const auto x : d) ++counts[assign_bin(static_cast<double>(x), b)];
  CHECK(counts == std::vector<int>{25, 25, 25, 25});
}

TEST_CASE("constant durations collapse to one bin") {
  const std::vector<std::int64_t> d(40, 500);
  const auto b = fit_bins(d, 4);
  CHECK(b.cuts.empty());
  CHECK(b.effective_bins() == 1);
  CHECK(assign_bin(500, b) == 0);
  CHECK(assign_bin(10, b) == 0);
  CHECK(assign_bin(9000, b) == 0);
}

TEST_CASE("discrete data with ties keeps strictly ascending cuts") {
  std::vector<std::int64_t> d;
  for (int v = 1; v <= 3; ++v)
    for (int i = 0; i < 30; ++i) d.push_back(v * 100);
  const auto b = fit_bins(d, 10);
  CHECK(std::adjacent_find(b.cuts.begin(), b.cuts.end(), std::greater_equal<>()) == b.cuts.end());
  CHECK(b.cuts == std::vector<double>{100, 200});
  CHECK(assign_bin(100, b) == 0);
  CHECK(assign_bin(200, b) == 1);
  CHECK(assign_bin(300, b) == 2);
}

TEST_CASE("uniform random durations fill 100 bins evenly") {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(50.0, 5000.0);
  std::vector<double> d(10000);
  for (auto& x : d) x = u(rng);
  const auto b = fit_bins(std::span<const double>(d), 100);
  REQUIRE(b.effective_bins() == 100);
  const auto counts = histogram(d, b);
  for (const int c : counts) {
    CHECK(c >= 98);
    CHECK(c <= 102);
  }
  // Tie-free data: counts differ by at most one.
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  CHECK(*hi - *lo <= 1);
  // Stability: assign_bin reproduces the same partition.
  std::vector<int> via_assign(100, 0);
  for (const double x : d) ++via_assign[assign_bin(x, b)];
  CHECK(via_assign == counts);
}

TEST_CASE("equal-frequency on tie-free sample sizes that do not divide evenly") {
  for (const int n : {101, 257, 999}) {
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = 10.0 + 0.37 * ((i * 7919) % n);
    for (const int k : {2, 7, 13}) {
      const auto counts = histogram(d, fit_bins(std::span<const double>(d), k));
      REQUIRE(static_cast<int>(counts.size()) == k);
      const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
      CHECK(*hi - *lo <= 1);
      CHECK(std::accumulate(counts.begin(), counts.end(), 0) == n);
    }
  }
}

TEST_CASE("assign_bin is upper-inclusive and total") {
  BinBoundaries b;
  b.k = 4;
  b.cuts = {25, 50, 75};
  CHECK(assign_bin(0, b) == 0);
  CHECK(assign_bin(-5, b) == 0);
  CHECK(assign_bin(25, b) == 0);
  CHECK(assign_bin(26, b) == 1);
  CHECK(assign_bin(50, b) == 1);
  CHECK(assign_bin(75, b) == 2);
  CHECK(assign_bin(76, b) == 3);
  CHECK(assign_bin(1e9, b) == 3);
  // Exhaustive scan against the interval definition.
  for (int d = 1; d <= 100; ++d) {
    const int expect = d <= 25 ? 0 : d <= 50 ? 1 : d <= 75 ? 2 : 3;
    CHECK(assign_bin(d, b) == expect);
  }
}

TEST_CASE("assign_bin is monotone") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 3000);
  std::vector<double> d(5000);
  for (auto& x : d) x = u(rng);
  const auto b = fit_bins(std::span<const double>(d), 100);
  int prev = 0;
  for (int ms = 0; ms <= 10000; ++ms) {
    const int i = assign_bin(ms, b);
    CHECK_MESSAGE(i >= prev, "ms=" << ms);
    prev = i;
  }
  CHECK(prev == 99);
}

TEST_CASE("bin tokens") {
  CHECK(bin_token(4, 100) == "BIN4");
  CHECK(bin_token(0, 100) == "BIN0");
  CHECK(bin_token(99, 100) == "BIN99");
  CHECK_THROWS_AS(bin_token(100, 100), std::out_of_range);
  CHECK_THROWS_AS(bin_token(-1, 100), std::out_of_range);
}

TEST_CASE("fit_bins preconditions") {
  const std::vector<std::int64_t> three{1, 2, 3};
  CHECK_THROWS_AS(fit_bins(three, 4), DataError);
  CHECK_THROWS_AS(fit_bins(three, 1), DataError);
  const std::vector<double> bad{1.0, std::nan(""), 3.0};
  CHECK_THROWS_AS(fit_bins(std::span<const double>(bad), 2), DataError);
}

TEST_CASE("boundaries JSON round trip and validation") {
  std::vector<std::int64_t> d(100);
  std::iota(d.begin(), d.end(), 1);
  const auto b = fit_bins(d, 4);
  const auto j = to_json(b);
  CHECK(j.at("cuts_ms") == nlohmann::json::array({25, 50, 75}));
  CHECK(j.at("fitted_on") == 100);
  CHECK(bins_from_json(j) == b);
  CHECK(fingerprint(bins_from_json(j)) == fingerprint(b));

  auto unsorted = j;
  unsorted["cuts_ms"] = {50, 25, 75};
  CHECK_THROWS_AS(bins_from_json(unsorted), DataError);
  auto too_many = j;
  too_many["cuts_ms"] = {1, 2, 3, 4};
  CHECK_THROWS_AS(bins_from_json(too_many), DataError);
  CHECK_THROWS_AS(bins_from_json(nlohmann::json{{"k", 4}}), DataError);

  auto other = b;
  other.cuts[1] = 51;
  CHECK(fingerprint(other) != fingerprint(b));
}

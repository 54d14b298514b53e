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


#ifndef ISODUB_TESTS_AUDIO_H_
#define ISODUB_TESTS_AUDIO_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace isodub::testing {

// Piecewise signal: (duration_ms, tone amplitude or 0 for silence). A faint
// noise floor runs underneath everything.
struct Piece {
  int ms;
  double amplitude;
};

inline std::vector<std::int16_t> synth(const std::vector<Piece>& pieces, int rate_hz, double gain = 1.0,
                                       double noise = 20.0, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> floor(0.0, noise);
  std::vector<std::int16_t> out;
  const double pi = std::acos(-1.0);
  for (const auto& p : pieces) {
    const auto n = static_cast<std::size_t>(static_cast<std::int64_t>(p.ms) * rate_hz / 1000);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(out.size()) / rate_hz;
      double v = p.amplitude * std::sin(2 * pi * 220.0 * t) + floor(rng);
      v *= gain;
      v = std::max(-32768.0, std::min(32767.0, std::round(v)));
      out.push_back(static_cast<std::int16_t>(v));
    }
  }
  return out;
}

}  // namespace isodub::testing

#endif  // ISODUB_TESTS_AUDIO_H_

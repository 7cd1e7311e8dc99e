// Copyright 2026 The igtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace igtomo {

/// SplitMix64 finaliser (Steele, Lea & Flood). Used only for seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the noise stream for trajectory `index` under master seed `seed`:
///   splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15)
/// Streams for different indices are decorrelated and independent of how many
/// trajectories a run contains.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Standard normal deviates from std::mt19937_64 via Box-Muller.
///
/// std::normal_distribution is implementation defined, so the transform is
/// done here to keep streams identical across standard libraries. Uniforms
/// use the top 53 bits of each engine output.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  double uniform_open0();  // (0, 1]

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace igtomo

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

// Batched per-sample arithmetic over structure-of-arrays Bloch data.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant that processes four samples per iteration. The variant is
// chosen at runtime from CPUID; IGTOMO_ISA=scalar|avx2 in the environment or
// set_active_isa() overrides the choice. Variants agree to rounding (the lane
// partial sums are reassociated), not bitwise.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "igtomo/types.hpp"

namespace igtomo::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);
bool is_available(Isa isa);
Isa best_available();
Isa active_isa();
/// Throws std::invalid_argument if the ISA is not available on this machine.
void set_active_isa(Isa isa);

/// Read-only SoA view: positions a[0..2][k] and velocities v[0..2][k].
struct SampleBlock {
  std::array<std::span<const double>, 3> a;
  std::array<std::span<const double>, 3> v;

  std::size_t size() const { return a[0].size(); }
  SampleBlock subblock(std::size_t begin, std::size_t end) const;
};

/// Owning SoA storage.
class SampleBuffer {
 public:
  void reserve(std::size_t n);
  void push_back(const Vec3& a, const Vec3& v);
  std::size_t size() const { return a_[0].size(); }
  Vec3 position(std::size_t k) const { return {a_[0][k], a_[1][k], a_[2][k]}; }
  Vec3 velocity(std::size_t k) const { return {v_[0][k], v_[1][k], v_[2][k]}; }
  SampleBlock block() const;
  SampleBlock block(std::size_t begin, std::size_t end) const;

 private:
  std::array<std::vector<double>, 3> a_;
  std::array<std::vector<double>, 3> v_;
};

/// Sample weighting: exclude |a| > 1 - eps_excl; clip the eigenvalues of the
/// inverse metric at weight_cap when weight_cap > 0.
struct WeightPolicy {
  double eps_excl = 1e-3;
  double weight_cap = 0.0;
};

inline constexpr int kMaxParams = 9;

/// Running normal-equation sums. Only the upper triangle (i <= j) of `a` is
/// maintained; `a` is row-major with stride kMaxParams.
struct NormalSums {
  int n_params = 6;
  std::array<double, kMaxParams * kMaxParams> a{};
  std::array<double, kMaxParams> b{};
  double vwv = 0.0;  // sum of v^T G^{-1} v
  std::int64_t n_included = 0;
  std::int64_t n_excluded = 0;

  double& upper(int i, int j) { return a[i * kMaxParams + j]; }
  double upper(int i, int j) const { return a[i * kMaxParams + j]; }
};

/// sums += sum over samples of H^T W H, H^T W v and v^T W v, where H is the
/// 3 x n_params design matrix and W the (possibly capped) inverse BKM metric.
void accumulate_normal(Isa isa, const SampleBlock& samples, const WeightPolicy& policy,
                       NormalSums& sums);

/// out[k] = w_k^T G^{-1}(a_k) w_k; NaN where |a_k| >= 1 - kBoundaryMargin.
/// `samples.v` holds the vectors w.
void inverse_metric_quadratic(Isa isa, const SampleBlock& samples, std::span<double> out);

}  // namespace igtomo::kernels

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

// AVX2/FMA kernels, four samples per iteration. Compiled with -mavx2 -mfma;
// only reached through dispatch after a CPUID check. This translation unit
// must not instantiate inline library code (Eigen, <algorithm>) that could be
// folded into the scalar build.
//
// The arctanh in the inverse metric is evaluated per lane through
// lane_coefficients(); the design-matrix products are fully vectorised.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "igtomo/bloch_state.hpp"
#include "kernels_internal.hpp"

namespace igtomo::kernels::avx2 {

namespace {

inline double hsum(__m256d x) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, x);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

struct Lanes {
  __m256d a[3];
  __m256d v[3];
  std::size_t count;  // valid lanes, 1..4
};

inline Lanes load_lanes(const SampleBlock& s, std::size_t base) {
  Lanes out;
  const std::size_t n = s.size();
  out.count = n - base < 4 ? n - base : 4;
  if (out.count == 4) {
    for (int i = 0; i < 3; ++i) {
      out.a[i] = _mm256_loadu_pd(s.a[i].data() + base);
      out.v[i] = _mm256_loadu_pd(s.v[i].data() + base);
    }
  } else {
    alignas(32) double pa[3][4] = {};
    alignas(32) double pv[3][4] = {};
    for (int i = 0; i < 3; ++i) {
      for (std::size_t l = 0; l < out.count; ++l) {
        pa[i][l] = s.a[i][base + l];
        pv[i][l] = s.v[i][base + l];
      }
      out.a[i] = _mm256_load_pd(pa[i]);
      out.v[i] = _mm256_load_pd(pv[i]);
    }
  }
  return out;
}

inline __m256d radius(const Lanes& x) {
  __m256d r2 = _mm256_mul_pd(x.a[0], x.a[0]);
  r2 = _mm256_fmadd_pd(x.a[1], x.a[1], r2);
  r2 = _mm256_fmadd_pd(x.a[2], x.a[2], r2);
  return _mm256_sqrt_pd(r2);
}

template <int K>
void accumulate_normal_impl(const SampleBlock& s, const WeightPolicy& policy, NormalSums& sums) {
  constexpr int kUpper = K * (K + 1) / 2;
  __m256d acc_a[kUpper];
  __m256d acc_b[K];
  for (auto& x : acc_a) x = _mm256_setzero_pd();
  for (auto& x : acc_b) x = _mm256_setzero_pd();
  __m256d acc_vwv = _mm256_setzero_pd();

  const __m256d zero = _mm256_setzero_pd();
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d minus_two = _mm256_set1_pd(-2.0);
  const __m256d one = _mm256_set1_pd(1.0);

  std::int64_t included = 0;
  std::int64_t excluded = 0;
  const std::size_t n = s.size();
  for (std::size_t base = 0; base < n; base += 4) {
    const Lanes x = load_lanes(s, base);

    alignas(32) double r_lane[4];
    alignas(32) double t_lane[4] = {};
    alignas(32) double k_lane[4] = {};
    _mm256_store_pd(r_lane, radius(x));
    for (std::size_t l = 0; l < x.count; ++l) {
      if (sample_included(r_lane[l], policy)) {
        lane_coefficients(r_lane[l], policy.weight_cap, t_lane[l], k_lane[l]);
        ++included;
      } else {
        ++excluded;
      }
    }
    const __m256d t = _mm256_load_pd(t_lane);
    const __m256d kc = _mm256_load_pd(k_lane);

    // W = t I + kc a a^T (symmetric).
    const __m256d ka0 = _mm256_mul_pd(kc, x.a[0]);
    const __m256d ka1 = _mm256_mul_pd(kc, x.a[1]);
    const __m256d ka2 = _mm256_mul_pd(kc, x.a[2]);
    __m256d w[3][3];
    w[0][0] = _mm256_fmadd_pd(ka0, x.a[0], t);
    w[1][1] = _mm256_fmadd_pd(ka1, x.a[1], t);
    w[2][2] = _mm256_fmadd_pd(ka2, x.a[2], t);
    w[0][1] = w[1][0] = _mm256_mul_pd(ka0, x.a[1]);
    w[0][2] = w[2][0] = _mm256_mul_pd(ka0, x.a[2]);
    w[1][2] = w[2][1] = _mm256_mul_pd(ka1, x.a[2]);

    // Design matrix columns.
    const __m256d p0 = _mm256_mul_pd(two, x.a[0]);
    const __m256d p1 = _mm256_mul_pd(two, x.a[1]);
    const __m256d p2 = _mm256_mul_pd(two, x.a[2]);
    const __m256d m0 = _mm256_mul_pd(minus_two, x.a[0]);
    const __m256d m1 = _mm256_mul_pd(minus_two, x.a[1]);
    const __m256d m2 = _mm256_mul_pd(minus_two, x.a[2]);
    __m256d h[3][K];
    h[0][0] = zero; h[1][0] = m2;   h[2][0] = p1;
    h[0][1] = p2;   h[1][1] = zero; h[2][1] = m0;
    h[0][2] = m1;   h[1][2] = p0;   h[2][2] = zero;
    h[0][3] = m0;   h[1][3] = zero; h[2][3] = zero;
    h[0][4] = zero; h[1][4] = m1;   h[2][4] = zero;
    h[0][5] = zero; h[1][5] = zero; h[2][5] = m2;
    if constexpr (K == 9) {
      for (int r = 0; r < 3; ++r) {
        for (int j = 6; j < 9; ++j) h[r][j] = (j - 6 == r) ? one : zero;
      }
    }

    __m256d wh[3][K];
    for (int r = 0; r < 3; ++r) {
      for (int j = 0; j < K; ++j) {
        __m256d acc = _mm256_mul_pd(w[r][0], h[0][j]);
        acc = _mm256_fmadd_pd(w[r][1], h[1][j], acc);
        wh[r][j] = _mm256_fmadd_pd(w[r][2], h[2][j], acc);
      }
    }
    __m256d wv[3];
    for (int r = 0; r < 3; ++r) {
      __m256d acc = _mm256_mul_pd(w[r][0], x.v[0]);
      acc = _mm256_fmadd_pd(w[r][1], x.v[1], acc);
      wv[r] = _mm256_fmadd_pd(w[r][2], x.v[2], acc);
    }

    int idx = 0;
    for (int i = 0; i < K; ++i) {
      for (int j = i; j < K; ++j, ++idx) {
        __m256d acc = acc_a[idx];
        acc = _mm256_fmadd_pd(h[0][i], wh[0][j], acc);
        acc = _mm256_fmadd_pd(h[1][i], wh[1][j], acc);
        acc_a[idx] = _mm256_fmadd_pd(h[2][i], wh[2][j], acc);
      }
      __m256d acc = acc_b[i];
      acc = _mm256_fmadd_pd(h[0][i], wv[0], acc);
      acc = _mm256_fmadd_pd(h[1][i], wv[1], acc);
      acc_b[i] = _mm256_fmadd_pd(h[2][i], wv[2], acc);
    }
    acc_vwv = _mm256_fmadd_pd(x.v[0], wv[0], acc_vwv);
    acc_vwv = _mm256_fmadd_pd(x.v[1], wv[1], acc_vwv);
    acc_vwv = _mm256_fmadd_pd(x.v[2], wv[2], acc_vwv);
  }

  int idx = 0;
  for (int i = 0; i < K; ++i) {
    for (int j = i; j < K; ++j, ++idx) sums.upper(i, j) += hsum(acc_a[idx]);
    sums.b[i] += hsum(acc_b[i]);
  }
  sums.vwv += hsum(acc_vwv);
  sums.n_included += included;
  sums.n_excluded += excluded;
}

}  // namespace

void accumulate_normal(const SampleBlock& samples, const WeightPolicy& policy, NormalSums& sums) {
  if (sums.n_params == 9) {
    accumulate_normal_impl<9>(samples, policy, sums);
  } else {
    accumulate_normal_impl<6>(samples, policy, sums);
  }
}

void inverse_metric_quadratic(const SampleBlock& samples, std::span<double> out) {
  const std::size_t n = samples.size();
  for (std::size_t base = 0; base < n; base += 4) {
    const Lanes x = load_lanes(samples, base);
    alignas(32) double r_lane[4];
    alignas(32) double t_lane[4] = {};
    alignas(32) double k_lane[4] = {};
    bool boundary[4] = {};
    _mm256_store_pd(r_lane, radius(x));
    for (std::size_t l = 0; l < x.count; ++l) {
      if (r_lane[l] < 1.0 - kBoundaryMargin) {
        lane_coefficients(r_lane[l], 0.0, t_lane[l], k_lane[l]);
      } else {
        boundary[l] = true;
      }
    }
    const __m256d t = _mm256_load_pd(t_lane);
    const __m256d kc = _mm256_load_pd(k_lane);
    __m256d ww = _mm256_mul_pd(x.v[0], x.v[0]);
    ww = _mm256_fmadd_pd(x.v[1], x.v[1], ww);
    ww = _mm256_fmadd_pd(x.v[2], x.v[2], ww);
    __m256d aw = _mm256_mul_pd(x.a[0], x.v[0]);
    aw = _mm256_fmadd_pd(x.a[1], x.v[1], aw);
    aw = _mm256_fmadd_pd(x.a[2], x.v[2], aw);
    const __m256d q = _mm256_fmadd_pd(_mm256_mul_pd(kc, aw), aw, _mm256_mul_pd(t, ww));

    alignas(32) double q_lane[4];
    _mm256_store_pd(q_lane, q);
    for (std::size_t l = 0; l < x.count; ++l) {
      out[base + l] = boundary[l] ? std::numeric_limits<double>::quiet_NaN() : q_lane[l];
    }
  }
}

}  // namespace igtomo::kernels::avx2

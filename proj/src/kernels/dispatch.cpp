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

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"

namespace igtomo::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(IGTOMO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  Isa isa = best_available();
  if (const char* env = std::getenv("IGTOMO_ISA")) {
    const std::string name(env);
    if (name == "scalar") {
      isa = Isa::kScalar;
    } else if (name == "avx2" && is_available(Isa::kAvx2)) {
      isa = Isa::kAvx2;
    }
  }
  return isa;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool is_available(Isa isa) {
  if (isa == Isa::kScalar) return true;
  static const bool has_avx2 = cpu_has_avx2();
  return has_avx2;
}

Isa best_available() { return is_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!is_available(isa)) {
    throw std::invalid_argument("ISA " + std::string(to_string(isa)) + " is not available");
  }
  active().store(isa, std::memory_order_relaxed);
}

SampleBlock SampleBlock::subblock(std::size_t begin, std::size_t end) const {
  SampleBlock out;
  for (int i = 0; i < 3; ++i) {
    out.a[i] = a[i].subspan(begin, end - begin);
    out.v[i] = v[i].subspan(begin, end - begin);
  }
  return out;
}

void SampleBuffer::reserve(std::size_t n) {
  for (int i = 0; i < 3; ++i) {
    a_[i].reserve(n);
    v_[i].reserve(n);
  }
}

void SampleBuffer::push_back(const Vec3& a, const Vec3& v) {
  for (int i = 0; i < 3; ++i) {
    a_[i].push_back(a[i]);
    v_[i].push_back(v[i]);
  }
}

SampleBlock SampleBuffer::block() const { return block(0, size()); }

SampleBlock SampleBuffer::block(std::size_t begin, std::size_t end) const {
  if (begin > end || end > size()) {
    throw std::out_of_range("SampleBuffer::block: range outside the buffer");
  }
  SampleBlock out;
  for (int i = 0; i < 3; ++i) {
    out.a[i] = std::span<const double>(a_[i]).subspan(begin, end - begin);
    out.v[i] = std::span<const double>(v_[i]).subspan(begin, end - begin);
  }
  return out;
}

void accumulate_normal(Isa isa, const SampleBlock& samples, const WeightPolicy& policy,
                       NormalSums& sums) {
  if (sums.n_params != 6 && sums.n_params != 9) {
    throw std::invalid_argument("accumulate_normal: n_params must be 6 or 9");
  }
#if defined(IGTOMO_HAVE_AVX2)
  if (isa == Isa::kAvx2 && is_available(Isa::kAvx2)) {
    avx2::accumulate_normal(samples, policy, sums);
    return;
  }
#endif
  (void)isa;
  scalar::accumulate_normal(samples, policy, sums);
}

void inverse_metric_quadratic(Isa isa, const SampleBlock& samples, std::span<double> out) {
  if (out.size() < samples.size()) {
    throw std::invalid_argument("inverse_metric_quadratic: output span too short");
  }
#if defined(IGTOMO_HAVE_AVX2)
  if (isa == Isa::kAvx2 && is_available(Isa::kAvx2)) {
    avx2::inverse_metric_quadratic(samples, out);
    return;
  }
#endif
  (void)isa;
  scalar::inverse_metric_quadratic(samples, out);
}

}  // namespace igtomo::kernels

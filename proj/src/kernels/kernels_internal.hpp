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

#include "igtomo/kernels.hpp"

namespace igtomo::kernels {

/// Shared sample gate: true when the sample contributes to the sums.
bool sample_included(double r, const WeightPolicy& policy);

/// Inverse-metric coefficients for one lane (cap <= 0 means no cap). Kept
/// out of line so the vector translation units need no Eigen code.
void lane_coefficients(double r, double cap, double& tangential, double& coupling);

namespace scalar {
void accumulate_normal(const SampleBlock& samples, const WeightPolicy& policy, NormalSums& sums);
void inverse_metric_quadratic(const SampleBlock& samples, std::span<double> out);
}  // namespace scalar

#if defined(IGTOMO_HAVE_AVX2)
namespace avx2 {
void accumulate_normal(const SampleBlock& samples, const WeightPolicy& policy, NormalSums& sums);
void inverse_metric_quadratic(const SampleBlock& samples, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace igtomo::kernels

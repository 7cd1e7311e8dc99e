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

// Reference kernels. These go through the same design_matrix and
// inverse-metric code as the per-sample API and define the expected results
// for the vectorised variants.

#include <limits>
#include <optional>

#include "igtomo/bkm_geometry.hpp"
#include "igtomo/estimator.hpp"
#include "kernels_internal.hpp"

namespace igtomo::kernels {

bool sample_included(double r, const WeightPolicy& policy) {
  return r <= 1.0 - policy.eps_excl && r < 1.0 - kBoundaryMargin;
}

void lane_coefficients(double r, double cap, double& tangential, double& coupling) {
  const auto coeff = inverse_metric_coefficients(
      r, cap > 0.0 ? std::optional<double>(cap) : std::nullopt);
  tangential = coeff.tangential;
  coupling = coeff.coupling;
}

namespace scalar {

void accumulate_normal(const SampleBlock& samples, const WeightPolicy& policy, NormalSums& sums) {
  const int k = sums.n_params;
  const EstimatorMode mode = k == 9 ? EstimatorMode::kExtended : EstimatorMode::kStandard;
  const std::optional<double> cap =
      policy.weight_cap > 0.0 ? std::optional<double>(policy.weight_cap) : std::nullopt;

  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Vec3 a(samples.a[0][s], samples.a[1][s], samples.a[2][s]);
    const Vec3 v(samples.v[0][s], samples.v[1][s], samples.v[2][s]);
    const double r = a.norm();
    if (!sample_included(r, policy)) {
      ++sums.n_excluded;
      continue;
    }
    const auto coeff = inverse_metric_coefficients(r, cap);
    const Mat3 w = coeff.tangential * Mat3::Identity() + coeff.coupling * a * a.transpose();
    const DesignMatrix h = design_matrix(a, mode);
    const DesignMatrix wh = w * h;
    const Vec3 wv = w * v;
    for (int i = 0; i < k; ++i) {
      for (int j = i; j < k; ++j) sums.upper(i, j) += h.col(i).dot(wh.col(j));
      sums.b[i] += h.col(i).dot(wv);
    }
    sums.vwv += v.dot(wv);
    ++sums.n_included;
  }
}

void inverse_metric_quadratic(const SampleBlock& samples, std::span<double> out) {
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Vec3 a(samples.a[0][s], samples.a[1][s], samples.a[2][s]);
    const Vec3 w(samples.v[0][s], samples.v[1][s], samples.v[2][s]);
    const double r = a.norm();
    if (!(r < 1.0 - kBoundaryMargin)) {
      out[s] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const auto coeff = inverse_metric_coefficients(r);
    const double along = a.dot(w);
    out[s] = coeff.tangential * w.squaredNorm() + coeff.coupling * along * along;
  }
}

}  // namespace scalar
}  // namespace igtomo::kernels

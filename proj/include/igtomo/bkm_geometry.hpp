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

#include <optional>

#include "igtomo/bloch_state.hpp"

// Bogoliubov-Kubo-Mori geometry of the qubit state space in Bloch coordinates.
//
// The metric has the tangential eigenvalue |a|/arctanh|a| (twice) and the
// radial eigenvalue 1 - |a|^2. Everything here rejects states within
// kBoundaryMargin of the unit sphere.

namespace igtomo {

using MetricMatrix = Mat3;

/// The two pieces of v^T G^{-1}(a) v: purity change and rotation.
struct SpeedDecomposition {
  double radial = 0.0;
  double angular = 0.0;
  double total = 0.0;
};

/// G^{-1}(a) = tangential * I + coupling * a a^T. The split keeps the small-|a|
/// limit finite; coupling -> 2/3 as |a| -> 0.
struct InverseMetricCoefficients {
  double tangential = 1.0;
  double coupling = 2.0 / 3.0;
};

/// Coefficients of the inverse metric at radius r. With a cap, both
/// eigenvalues are clipped to at most *cap (cap >= 1).
InverseMetricCoefficients inverse_metric_coefficients(double r,
                                                      std::optional<double> cap = std::nullopt);

MetricMatrix metric(const BlochVector& a);
MetricMatrix inverse_metric(const BlochVector& a);

/// Logarithmic mean (p - q)/(ln p - ln q); p when p == q.
double logarithmic_mean(double p, double q);

/// Kubo-Mori canonical correlation <X, Y>_cc = int_0^1 Tr[rho^s X rho^{1-s} Y] ds,
/// evaluated in the eigenbasis of rho(a). Slow path kept as an oracle.
double canonical_correlation(const BlochVector& a, const Mat2c& x, const Mat2c& y);

/// Xi_ij = <sigma_i - a_i, sigma_j - a_j>_cc. Equals metric(a).
MetricMatrix covariance_matrix(const BlochVector& a);

/// D(rho1 || rho2) = Tr rho1 (ln rho1 - ln rho2), from natural coordinates.
double relative_entropy(const BlochVector& a1, const BlochVector& a2);

SpeedDecomposition info_speed_sq(const BlochVector& a, const Vec3& a_dot);

/// 2 D(a_t || a_{t+dt}) / dt^2.
double fd_speed(const BlochVector& a_t, const BlochVector& a_tdt, double dt);

}  // namespace igtomo

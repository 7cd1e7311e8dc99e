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

#include "igtomo/types.hpp"

namespace igtomo {

/// States with |a| >= 1 - kBoundaryMargin are treated as pure.
inline constexpr double kBoundaryMargin = 1e-12;

/// Below this radius the ratio functions switch to their Taylor series.
inline constexpr double kSeriesThreshold = 1e-4;

/// Point of the closed unit ball: a_mu = Tr[rho sigma_mu].
class BlochVector {
 public:
  BlochVector() : a_(Vec3::Zero()) {}
  /// Throws std::invalid_argument if |a| > 1 (beyond rounding) or non-finite.
  explicit BlochVector(const Vec3& a);
  BlochVector(double x, double y, double z) : BlochVector(Vec3(x, y, z)) {}

  const Vec3& vec() const { return a_; }
  double operator[](int i) const { return a_[i]; }
  double norm() const { return a_.norm(); }

  /// True when every BKM quantity is finite at this state.
  bool is_strictly_mixed() const { return norm() < 1.0 - kBoundaryMargin; }

 private:
  Vec3 a_;
};

/// Natural parameters of the qubit exponential family, rho = exp(theta.sigma - psi).
struct NaturalParams {
  NaturalParams() : theta(Vec3::Zero()) {}
  explicit NaturalParams(const Vec3& t) : theta(t) {}
  Vec3 theta;
};

/// Validated 2x2 density matrix. Used by the oracle tests; the pipeline
/// itself never leaves Bloch coordinates.
class DensityMatrix {
 public:
  /// Throws std::invalid_argument unless m is Hermitian and unit-trace to 1e-9
  /// with eigenvalues >= -1e-12.
  static DensityMatrix from_matrix(const Mat2c& m);

  const Mat2c& matrix() const { return m_; }
  Eigen::Vector2d eigenvalues() const;

 private:
  explicit DensityMatrix(const Mat2c& m) : m_(m) {}
  Mat2c m_;
};

/// sigma_1, sigma_2, sigma_3 for index 0, 1, 2.
const Mat2c& pauli(int index);

/// arctanh(r)/r with the series 1 + r^2/3 + r^4/5 for small r.
double atanh_over_r(double r);
/// tanh(s)/s with the series 1 - s^2/3 + 2 s^4/15 for small s.
double tanh_over_r(double s);
/// ln cosh(s) without cancellation near s = 0.
double log_cosh(double s);

/// Throws BoundaryError unless |a| < 1 - kBoundaryMargin.
void require_strictly_mixed(const Vec3& a, const char* where);

NaturalParams to_natural(const BlochVector& a);
BlochVector from_natural(const NaturalParams& theta);

/// psi(theta) = ln Tr exp(theta.sigma) = ln(2 cosh|theta|), overflow safe.
double potential(const NaturalParams& theta);

DensityMatrix to_density(const BlochVector& a);
BlochVector from_density(const DensityMatrix& rho);

}  // namespace igtomo

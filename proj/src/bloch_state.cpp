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

#include "igtomo/bloch_state.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace igtomo {

namespace {
constexpr double kUnitTolerance = 1e-12;
constexpr double kDensityTolerance = 1e-9;
}  // namespace

BlochVector::BlochVector(const Vec3& a) : a_(a) {
  if (!a.allFinite()) {
    throw std::invalid_argument("BlochVector: non-finite component");
  }
  if (a.norm() > 1.0 + kUnitTolerance) {
    throw std::invalid_argument("BlochVector: |a| = " + std::to_string(a.norm()) +
                                " lies outside the unit ball");
  }
}

DensityMatrix DensityMatrix::from_matrix(const Mat2c& m) {
  if (!m.allFinite()) {
    throw std::invalid_argument("DensityMatrix: non-finite entry");
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kDensityTolerance) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  if (std::abs(m.trace() - cplx(1.0, 0.0)) > kDensityTolerance) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  }
  DensityMatrix rho(m);
  if (rho.eigenvalues().minCoeff() < -kUnitTolerance) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
  return rho;
}

Eigen::Vector2d DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Mat2c> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

const Mat2c& pauli(int index) {
  static const Mat2c kPauli[3] = {
      (Mat2c() << 0.0, 1.0, 1.0, 0.0).finished(),
      (Mat2c() << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0).finished(),
      (Mat2c() << 1.0, 0.0, 0.0, -1.0).finished(),
  };
  if (index < 0 || index > 2) {
    throw std::out_of_range("pauli: index must be 0, 1 or 2");
  }
  return kPauli[index];
}

double atanh_over_r(double r) {
  if (r < kSeriesThreshold) {
    const double r2 = r * r;
    return 1.0 + r2 / 3.0 + r2 * r2 / 5.0;
  }
  return std::atanh(r) / r;
}

double tanh_over_r(double s) {
  if (s < kSeriesThreshold) {
    const double s2 = s * s;
    return 1.0 - s2 / 3.0 + 2.0 * s2 * s2 / 15.0;
  }
  return std::tanh(s) / s;
}

double log_cosh(double s) {
  s = std::abs(s);
  if (s < 1.0) {
    const double sh = std::sinh(0.5 * s);
    return std::log1p(2.0 * sh * sh);
  }
  return s + std::log1p(std::exp(-2.0 * s)) - std::numbers::ln2;
}

void require_strictly_mixed(const Vec3& a, const char* where) {
  const double r = a.norm();
  if (!(r < 1.0 - kBoundaryMargin)) {
    throw BoundaryError(std::string(where) + ": |a| = " + std::to_string(r) +
                        " is on the pure-state boundary");
  }
}

NaturalParams to_natural(const BlochVector& a) {
  require_strictly_mixed(a.vec(), "to_natural");
  return NaturalParams(atanh_over_r(a.norm()) * a.vec());
}

BlochVector from_natural(const NaturalParams& theta) {
  const double s = theta.theta.norm();
  if (std::isinf(s)) {
    throw std::invalid_argument("from_natural: infinite natural parameter");
  }
  Vec3 a = tanh_over_r(s) * theta.theta;
  // tanh saturates to exactly 1 for |theta| > ~19; keep the result in the ball.
  const double r = a.norm();
  if (r > 1.0) a /= r;
  return BlochVector(a);
}

double potential(const NaturalParams& theta) {
  const double s = theta.theta.norm();
  return s + std::log1p(std::exp(-2.0 * s));
}

DensityMatrix to_density(const BlochVector& a) {
  Mat2c m = 0.5 * Mat2c::Identity();
  for (int mu = 0; mu < 3; ++mu) m += 0.5 * a[mu] * pauli(mu);
  return DensityMatrix::from_matrix(m);
}

BlochVector from_density(const DensityMatrix& rho) {
  Vec3 a;
  for (int mu = 0; mu < 3; ++mu) a[mu] = (rho.matrix() * pauli(mu)).trace().real();
  return BlochVector(a);
}

}  // namespace igtomo

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

#include "igtomo/bkm_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace igtomo {

namespace {

// Relative spread below which the logarithmic mean uses its series.
constexpr double kLogMeanSeriesThreshold = 1e-8;

}  // namespace

InverseMetricCoefficients inverse_metric_coefficients(double r, std::optional<double> cap) {
  if (cap && !(*cap >= 1.0)) {
    throw std::invalid_argument("inverse_metric_coefficients: weight cap must be >= 1");
  }
  const double r2 = r * r;
  double tangential = atanh_over_r(r);
  double radial = 1.0 / (1.0 - r2);
  const bool clipped = cap && (tangential > *cap || radial > *cap);
  if (cap) {
    tangential = std::min(tangential, *cap);
    radial = std::min(radial, *cap);
  }
  InverseMetricCoefficients out;
  out.tangential = tangential;
  if (r < kSeriesThreshold && !clipped) {
    out.coupling = 2.0 / 3.0 + 0.8 * r2;
  } else if (r2 == 0.0) {
    out.coupling = 0.0;
  } else {
    out.coupling = (radial - tangential) / r2;
  }
  return out;
}

namespace {

// t I + c x x^T, filled from the upper triangle so the result is exactly symmetric.
Mat3 isotropic_plus_rank_one(double t, double c, const Vec3& x) {
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      m(i, j) = c * (x[i] * x[j]) + (i == j ? t : 0.0);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

}  // namespace

MetricMatrix metric(const BlochVector& a) {
  require_strictly_mixed(a.vec(), "metric");
  const double r = a.norm();
  const double r2 = r * r;
  const double tangential = 1.0 / atanh_over_r(r);
  const double coupling =
      r < kSeriesThreshold ? -2.0 / 3.0 + 4.0 * r2 / 45.0 : ((1.0 - r2) - tangential) / r2;
  return isotropic_plus_rank_one(tangential, coupling, a.vec());
}

MetricMatrix inverse_metric(const BlochVector& a) {
  require_strictly_mixed(a.vec(), "inverse_metric");
  const auto k = inverse_metric_coefficients(a.norm());
  return isotropic_plus_rank_one(k.tangential, k.coupling, a.vec());
}

double logarithmic_mean(double p, double q) {
  if (!(p > 0.0 && q > 0.0)) {
    throw std::domain_error("logarithmic_mean: arguments must be positive");
  }
  const double sum = p + q;
  if (std::abs(p - q) < kLogMeanSeriesThreshold * sum) {
    // p = mu(1 + x), q = mu(1 - x): mu x / atanh(x).
    const double mu = 0.5 * sum;
    const double x = (p - q) / sum;
    const double x2 = x * x;
    return mu * (1.0 - x2 / 3.0 - 4.0 * x2 * x2 / 45.0);
  }
  return (p - q) / (std::log(p) - std::log(q));
}

double canonical_correlation(const BlochVector& a, const Mat2c& x, const Mat2c& y) {
  require_strictly_mixed(a.vec(), "canonical_correlation");
  const DensityMatrix rho = to_density(a);
  Eigen::SelfAdjointEigenSolver<Mat2c> es(rho.matrix());
  const Eigen::Vector2d lambda = es.eigenvalues();
  const Mat2c& u = es.eigenvectors();
  const Mat2c xt = u.adjoint() * x * u;
  const Mat2c yt = u.adjoint() * y * u;
  cplx acc = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      acc += logarithmic_mean(lambda[i], lambda[j]) * xt(i, j) * yt(j, i);
    }
  }
  return acc.real();
}

MetricMatrix covariance_matrix(const BlochVector& a) {
  MetricMatrix xi;
  Mat2c fluct[3];
  for (int i = 0; i < 3; ++i) fluct[i] = pauli(i) - a[i] * Mat2c::Identity();
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      xi(i, j) = canonical_correlation(a, fluct[i], fluct[j]);
      xi(j, i) = xi(i, j);
    }
  }
  return xi;
}

double relative_entropy(const BlochVector& a1, const BlochVector& a2) {
  const Vec3 theta1 = to_natural(a1).theta;
  const Vec3 theta2 = to_natural(a2).theta;
  const double s1 = theta1.norm();
  const double s2 = theta2.norm();
  const Vec3 dtheta = theta1 - theta2;

  // D = a1.(theta1 - theta2) - (ln cosh s1 - ln cosh s2). Both terms are first
  // order in the separation, so the potential difference is formed from
  // s1 - s2 directly instead of subtracting two O(1) potentials.
  double dpsi;
  const double ssum = s1 + s2;
  const double ds = ssum > 0.0 ? dtheta.dot(theta1 + theta2) / ssum : 0.0;
  if (std::abs(ds) <= 1.0) {
    const double ratio_m1 = 2.0 * std::sinh(0.5 * ssum) * std::sinh(0.5 * ds) / std::cosh(s2);
    dpsi = std::log1p(ratio_m1);
  } else {
    dpsi = log_cosh(s1) - log_cosh(s2);
  }
  return std::max(0.0, a1.vec().dot(dtheta) - dpsi);
}

SpeedDecomposition info_speed_sq(const BlochVector& a, const Vec3& a_dot) {
  require_strictly_mixed(a.vec(), "info_speed_sq");
  SpeedDecomposition out;
  const double r2 = a.vec().squaredNorm();
  if (r2 == 0.0) {
    // Both factors tend to 1 at the centre; the split is arbitrary there.
    out.angular = a_dot.squaredNorm();
  } else {
    const double r = std::sqrt(r2);
    const double along = a.vec().dot(a_dot);
    out.radial = along * along / (r2 * (1.0 - r2));
    out.angular = atanh_over_r(r) / r2 * a.vec().cross(a_dot).squaredNorm();
  }
  out.total = out.radial + out.angular;
  return out;
}

double fd_speed(const BlochVector& a_t, const BlochVector& a_tdt, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("fd_speed: dt must be positive");
  }
  return 2.0 * relative_entropy(a_t, a_tdt) / (dt * dt);
}

}  // namespace igtomo

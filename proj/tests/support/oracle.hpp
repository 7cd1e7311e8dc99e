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

// Independent reference computations for the tests. Nothing here calls into
// the library: states are built as 2x2 matrices and everything goes through
// explicit eigendecompositions or brute-force integration.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace igtomo::oracle {

using C = std::complex<double>;
using M2 = Eigen::Matrix2cd;
using V3 = Eigen::Vector3d;

inline M2 pauli_x() { return (M2() << 0, 1, 1, 0).finished(); }
inline M2 pauli_y() { return (M2() << 0, C(0, -1), C(0, 1), 0).finished(); }
inline M2 pauli_z() { return (M2() << 1, 0, 0, -1).finished(); }

inline M2 rho_of(const V3& a) {
  return 0.5 * (M2::Identity() + a[0] * pauli_x() + a[1] * pauli_y() + a[2] * pauli_z());
}

inline V3 bloch_of(const M2& rho) {
  return {(rho * pauli_x()).trace().real(), (rho * pauli_y()).trace().real(),
          (rho * pauli_z()).trace().real()};
}

// f(rho) through the Hermitian eigendecomposition.
template <class F>
M2 hermitian_function(const M2& m, F f) {
  Eigen::SelfAdjointEigenSolver<M2> es(m);
  Eigen::Vector2cd fl;
  for (int i = 0; i < 2; ++i) fl[i] = f(es.eigenvalues()[i]);
  return es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().adjoint();
}

inline double relative_entropy(const V3& a1, const V3& a2) {
  const M2 r1 = rho_of(a1);
  const M2 r2 = rho_of(a2);
  auto ln = [](double x) { return C(std::log(x), 0.0); };
  return (r1 * (hermitian_function(r1, ln) - hermitian_function(r2, ln))).trace().real();
}

// ln Tr exp(theta.sigma), summed directly over the eigenvalues +-|theta|.
inline double psi(const V3& theta) {
  const M2 h = theta[0] * pauli_x() + theta[1] * pauli_y() + theta[2] * pauli_z();
  Eigen::SelfAdjointEigenSolver<M2> es(h);
  return std::log(std::exp(es.eigenvalues()[0]) + std::exp(es.eigenvalues()[1]));
}

inline V3 natural_of(const V3& a) {
  const double r = a.norm();
  return r == 0.0 ? V3::Zero() : V3(std::atanh(r) / r * a);
}

// Central-difference Hessian of psi at theta with step h.
inline Eigen::Matrix3d psi_hessian(const V3& theta, double h) {
  Eigen::Matrix3d hess;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      V3 ei = V3::Zero();
      V3 ej = V3::Zero();
      ei[i] = h;
      ej[j] = h;
      hess(i, j) = (psi(theta + ei + ej) - psi(theta + ei - ej) - psi(theta - ei + ej) +
                    psi(theta - ei - ej)) /
                   (4.0 * h * h);
    }
  }
  return hess;
}

// Kubo-Mori correlation by Gauss-Legendre quadrature of int_0^1 Tr[rho^s X rho^(1-s) Y] ds.
inline double canonical_correlation_quadrature(const M2& rho, const M2& x, const M2& y) {
  static const double nodes[] = {-0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
                                 -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
                                 0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
                                 0.9739065285171717};
  static const double weights[] = {0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
                                   0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
                                   0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                                   0.0666713443086881};
  // 8 panels of 10-point Gauss-Legendre.
  double total = 0.0;
  const int panels = 8;
  for (int p = 0; p < panels; ++p) {
    const double lo = static_cast<double>(p) / panels;
    const double hi = static_cast<double>(p + 1) / panels;
    for (int q = 0; q < 10; ++q) {
      const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes[q];
      const M2 rs = hermitian_function(rho, [s](double l) { return C(std::pow(l, s), 0.0); });
      const M2 rs1 = hermitian_function(rho, [s](double l) { return C(std::pow(l, 1.0 - s), 0.0); });
      total += 0.5 * (hi - lo) * weights[q] * (rs * x * rs1 * y).trace().real();
    }
  }
  return total;
}

struct Jump {
  M2 op;
  double rate;
};

inline M2 lindblad_rhs(const M2& h, const std::vector<Jump>& jumps, const M2& rho) {
  const C i(0.0, 1.0);
  M2 out = -i * (h * rho - rho * h);
  for (const auto& j : jumps) {
    const M2 ld = j.op.adjoint();
    out += j.rate * (j.op * rho * ld - 0.5 * (ld * j.op * rho + rho * ld * j.op));
  }
  return out;
}

// Density-matrix RK4; returns the Bloch vector after n steps.
inline V3 evolve_density(const M2& h, const std::vector<Jump>& jumps, const V3& a0, double dt,
                         int n) {
  M2 rho = rho_of(a0);
  for (int k = 0; k < n; ++k) {
    const M2 k1 = lindblad_rhs(h, jumps, rho);
    const M2 k2 = lindblad_rhs(h, jumps, rho + 0.5 * dt * k1);
    const M2 k3 = lindblad_rhs(h, jumps, rho + 0.5 * dt * k2);
    const M2 k4 = lindblad_rhs(h, jumps, rho + dt * k3);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return bloch_of(rho);
}

// Uniform random point with radius drawn uniformly from [r_lo, r_hi].
inline V3 random_state(std::mt19937_64& gen, double r_lo, double r_hi) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(r_lo, r_hi);
  V3 dir(n(gen), n(gen), n(gen));
  return u(gen) * dir.normalized();
}

}  // namespace igtomo::oracle

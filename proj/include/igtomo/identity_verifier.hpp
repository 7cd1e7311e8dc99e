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

// Numerical check of the qubit speed identity
//
//   (d|a|/dt)^2/(1-|a|^2) + arctanh|a|/|a|^3 |a x a_dot|^2
//       = lim_{dt->0} 2 D(a(t) || a(t+dt)) / dt^2
//
// together with its GKSL form in terms of e_perp and D_r. The right-hand
// side is evaluated at finite dt, so agreement is first order in dt.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

#include "igtomo/gksl_dynamics.hpp"

namespace igtomo {

/// e - (a.e)/|a|^2 a. Throws std::invalid_argument for a = 0.
Vec3 orthogonal_component(const Vec3& e, const Vec3& a);

/// v^T G^{-1}(a) v as the radial plus angular terms.
double lhs_general(const BlochVector& a, const Vec3& a_dot);

/// 4 (a^T D a)^2 / (|a|^2 (1-|a|^2)) + 4 arctanh|a|/|a|^3 || |a|^2 e_perp - a x (D a) ||^2.
/// Requires model.c = 0 and 0 < |a| < 1.
double lhs_gksl(const GkslModel& model, const BlochVector& a);

// lhs_gksl and err_gksl_gen are NaN when the model has c != 0.
struct IdentityRecord {
  double t = 0.0;
  double lhs_general = 0.0;
  double lhs_gksl = std::numeric_limits<double>::quiet_NaN();
  double rhs_fd = 0.0;
  double err_gen_fd = 0.0;
  double err_gksl_gen = std::numeric_limits<double>::quiet_NaN();
};

struct IdentityReport {
  double dt_fd = 0.0;
  std::vector<IdentityRecord> records;
  std::size_t n_excluded = 0;
  double max_err_gen_fd = 0.0;
  double max_err_gksl_gen = 0.0;
};

/// Checks every sample of a noiseless trajectory (exact velocities required).
/// The forward state for the relative entropy is one RK4 step of length dt_fd.
/// Samples with |a| > 1 - boundary_margin, at the origin, or rejected by the
/// geometry are counted in n_excluded rather than raising.
IdentityReport verify_trajectory(const GkslModel& model, const Trajectory& traj, double dt_fd,
                                 double boundary_margin = 1e-3);

/// Same trajectory checked at dt_fd and dt_fd/2; for a first-order limit the
/// ratio of maximum errors is close to 2.
struct OrderCheck {
  IdentityReport coarse;
  IdentityReport fine;
  double ratio = 0.0;
};
OrderCheck check_order(const GkslModel& model, const Trajectory& traj, double dt_fd,
                       double boundary_margin = 1e-3);

/// t,lhs_general,lhs_gksl,rhs_fd,err_gen_fd,err_gksl_gen
void write_identity_csv(std::ostream& os, const IdentityReport& report);

}  // namespace igtomo

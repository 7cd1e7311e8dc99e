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

#include "igtomo/identity_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "igtomo/bkm_geometry.hpp"
#include "igtomo/kernels.hpp"
#include "igtomo/trajectory_io.hpp"

namespace igtomo {

namespace {

double relative_gap(double value, double reference) {
  const double diff = std::abs(value - reference);
  return reference > 0.0 ? diff / reference : diff;
}

}  // namespace

Vec3 orthogonal_component(const Vec3& e, const Vec3& a) {
  const double r2 = a.squaredNorm();
  if (r2 == 0.0) {
    throw std::invalid_argument("orthogonal_component: a = 0 has no orthogonal complement");
  }
  return e - (a.dot(e) / r2) * a;
}

double lhs_general(const BlochVector& a, const Vec3& a_dot) { return info_speed_sq(a, a_dot).total; }

double lhs_gksl(const GkslModel& model, const BlochVector& a) {
  if (!model.c.isZero(0.0)) {
    throw std::invalid_argument("lhs_gksl: the GKSL form assumes c = 0");
  }
  require_strictly_mixed(a.vec(), "lhs_gksl");
  const Vec3& x = a.vec();
  const double r2 = x.squaredNorm();
  if (r2 == 0.0) {
    throw std::invalid_argument("lhs_gksl: undefined at a = 0");
  }
  const Vec3 da = model.d.cwiseProduct(x);
  const double ada = x.dot(da);
  const double radial = 4.0 * ada * ada / (r2 * (1.0 - r2));
  const Vec3 rotation = r2 * orthogonal_component(model.e, x) - x.cross(da);
  const double angular = 4.0 * atanh_over_r(std::sqrt(r2)) / r2 * rotation.squaredNorm();
  return radial + angular;
}

IdentityReport verify_trajectory(const GkslModel& model, const Trajectory& traj, double dt_fd,
                                 double boundary_margin) {
  if (!traj.v_exact) {
    throw std::invalid_argument("verify_trajectory: needs a noiseless trajectory with exact velocities");
  }
  if (!(dt_fd > 0.0)) {
    throw std::invalid_argument("verify_trajectory: dt_fd must be positive");
  }
  const auto& v = *traj.v_exact;
  const bool gksl_form = model.c.isZero(0.0);

  // lhs_general for all samples at once through the batch kernel.
  kernels::SampleBuffer buf;
  buf.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) buf.push_back(traj.a[k], v[k]);
  std::vector<double> general(traj.size());
  kernels::inverse_metric_quadratic(kernels::active_isa(), buf.block(), general);

  IdentityReport report;
  report.dt_fd = dt_fd;
  report.records.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vec3& a = traj.a[k];
    const double r = a.norm();
    if (r > 1.0 - boundary_margin || r == 0.0 || !std::isfinite(general[k])) {
      ++report.n_excluded;
      continue;
    }
    try {
      const BlochVector state(a);
      const BlochVector ahead(rk4_step(model, a, dt_fd));
      IdentityRecord rec;
      rec.t = traj.t[k];
      rec.lhs_general = general[k];
      rec.rhs_fd = fd_speed(state, ahead, dt_fd);
      rec.err_gen_fd = relative_gap(rec.rhs_fd, rec.lhs_general);
      report.max_err_gen_fd = std::max(report.max_err_gen_fd, rec.err_gen_fd);
      if (gksl_form) {
        rec.lhs_gksl = lhs_gksl(model, state);
        rec.err_gksl_gen = relative_gap(rec.lhs_gksl, rec.lhs_general);
        report.max_err_gksl_gen = std::max(report.max_err_gksl_gen, rec.err_gksl_gen);
      }
      report.records.push_back(rec);
    } catch (const BoundaryError&) {
      ++report.n_excluded;
    } catch (const std::invalid_argument&) {
      ++report.n_excluded;
    }
  }
  return report;
}

OrderCheck check_order(const GkslModel& model, const Trajectory& traj, double dt_fd,
                       double boundary_margin) {
  OrderCheck out;
  out.coarse = verify_trajectory(model, traj, dt_fd, boundary_margin);
  out.fine = verify_trajectory(model, traj, 0.5 * dt_fd, boundary_margin);
  out.ratio = out.fine.max_err_gen_fd > 0.0 ? out.coarse.max_err_gen_fd / out.fine.max_err_gen_fd
                                            : 0.0;
  return out;
}

void write_identity_csv(std::ostream& os, const IdentityReport& report) {
  os << "t,lhs_general,lhs_gksl,rhs_fd,err_gen_fd,err_gksl_gen\n";
  for (const auto& rec : report.records) {
    os << format_real(rec.t) << ',' << format_real(rec.lhs_general) << ','
       << format_real(rec.lhs_gksl) << ',' << format_real(rec.rhs_fd) << ','
       << format_real(rec.err_gen_fd) << ',' << format_real(rec.err_gksl_gen) << '\n';
  }
}

}  // namespace igtomo

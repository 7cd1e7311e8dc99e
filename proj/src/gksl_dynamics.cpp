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

#include "igtomo/gksl_dynamics.hpp"

#include <cmath>
#include <cstdio>

#include "igtomo/rng.hpp"

namespace igtomo {

namespace {

std::string format_vec(const Vec3& v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "(%.17g,%.17g,%.17g)", v[0], v[1], v[2]);
  return buf;
}

template <typename Generator>
Vec3 rk4(const Generator& g, const Vec3& a, double dt) {
  const Vec3 k1 = bloch_rhs(g, a);
  const Vec3 k2 = bloch_rhs(g, a + 0.5 * dt * k1);
  const Vec3 k3 = bloch_rhs(g, a + 0.5 * dt * k2);
  const Vec3 k4 = bloch_rhs(g, a + dt * k3);
  return a + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename Generator>
Trajectory integrate_impl(const Generator& g, const BlochVector& a0, double dt, std::size_t n_steps,
                          std::string tag) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("integrate: dt must be positive");
  }
  Trajectory traj;
  traj.meta.model = std::move(tag);
  traj.t.reserve(n_steps + 1);
  traj.a.reserve(n_steps + 1);
  std::vector<Vec3> v;
  v.reserve(n_steps + 1);

  Vec3 a = a0.vec();
  for (std::size_t k = 0; k <= n_steps; ++k) {
    if (k > 0) {
      a = rk4(g, a, dt);
      if (!(a.norm() < 1.0)) {
        throw BoundaryError("integrate: trajectory left the open Bloch ball at step " +
                            std::to_string(k));
      }
    }
    traj.t.push_back(static_cast<double>(k) * dt);
    traj.a.push_back(a);
    v.push_back(bloch_rhs(g, a));
  }
  traj.v_exact = std::move(v);
  return traj;
}

}  // namespace

std::string GkslModel::tag() const {
  return "gksl e=" + format_vec(e) + " d=" + format_vec(d) + " c=" + format_vec(c);
}

AffineGenerator AffineGenerator::from_model(const GkslModel& model) {
  AffineGenerator g;
  const Vec3& e = model.e;
  // 2 e x a as a matrix acting on a.
  g.lambda << 0.0, -2.0 * e[2], 2.0 * e[1],
              2.0 * e[2], 0.0, -2.0 * e[0],
              -2.0 * e[1], 2.0 * e[0], 0.0;
  g.lambda.diagonal() -= 2.0 * model.d;
  g.c = model.c;
  return g;
}

std::string to_string(BoundaryPolicy policy) {
  return policy == BoundaryPolicy::kReject ? "reject" : "project";
}

BoundaryPolicy parse_boundary_policy(const std::string& text) {
  if (text == "reject") return BoundaryPolicy::kReject;
  if (text == "project" || text == "radial-projection") return BoundaryPolicy::kProject;
  throw ConfigError("unknown boundary policy '" + text + "' (expected reject|project)");
}

double Trajectory::uniform_dt() const {
  if (t.size() < 2) {
    throw std::invalid_argument("trajectory has fewer than two samples");
  }
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(dt > 0.0)) {
    throw std::invalid_argument("trajectory time grid is not increasing");
  }
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (std::abs((t[k] - t[k - 1]) - dt) > 1e-9 * dt + 1e-12 * std::abs(t[k])) {
      throw std::invalid_argument("trajectory time grid is not uniform at sample " +
                                  std::to_string(k));
    }
  }
  return dt;
}

Vec3 bloch_rhs(const GkslModel& model, const Vec3& a) {
  return 2.0 * model.e.cross(a) - 2.0 * model.d.cwiseProduct(a) + model.c;
}

Vec3 bloch_rhs(const AffineGenerator& generator, const Vec3& a) {
  return generator.lambda * a + generator.c;
}

Vec3 rk4_step(const GkslModel& model, const Vec3& a, double dt) { return rk4(model, a, dt); }

Vec3 rk4_step(const AffineGenerator& generator, const Vec3& a, double dt) {
  return rk4(generator, a, dt);
}

Trajectory integrate(const GkslModel& model, const BlochVector& a0, double dt,
                     std::size_t n_steps) {
  return integrate_impl(model, a0, dt, n_steps, model.tag());
}

Trajectory integrate(const AffineGenerator& generator, const BlochVector& a0, double dt,
                     std::size_t n_steps) {
  return integrate_impl(generator, a0, dt, n_steps, "affine");
}

Trajectory add_noise(const Trajectory& traj, const NoiseSpec& noise, std::uint64_t stream_index) {
  if (!(noise.sigma >= 0.0)) {
    throw std::invalid_argument("add_noise: sigma must be non-negative");
  }
  Trajectory out;
  out.t = traj.t;
  out.a.reserve(traj.a.size());
  out.meta = traj.meta;
  out.meta.seed = noise.seed;
  out.meta.sigma = noise.sigma;
  out.meta.boundary_policy = noise.boundary_policy;
  out.meta.n_projected = 0;

  GaussianStream gauss(stream_seed(noise.seed, stream_index));
  for (std::size_t k = 0; k < traj.a.size(); ++k) {
    Vec3 a = traj.a[k];
    if (noise.sigma > 0.0) {
      for (int i = 0; i < 3; ++i) a[i] += noise.sigma * gauss.next();
    }
    const double r = a.norm();
    if (r > kProjectionRadius) {
      if (noise.boundary_policy == BoundaryPolicy::kReject) {
        throw BoundaryError("add_noise: sample " + std::to_string(k) +
                            " left the Bloch ball (|a| = " + std::to_string(r) + ")");
      }
      a *= kProjectionRadius / r;
      ++out.meta.n_projected;
    }
    out.a.push_back(a);
  }
  return out;
}

}  // namespace igtomo

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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "igtomo/bloch_state.hpp"

namespace igtomo {

/// Bloch-form GKSL generator: a_dot = 2 e x a - 2 diag(d) a + c.
/// Rates are in units of 1/T0.
struct GkslModel {
  Vec3 e = Vec3::Zero();
  Vec3 d = Vec3::Zero();
  Vec3 c = Vec3::Zero();

  /// d_i >= 0 and c = 0: relaxes towards the maximally mixed state.
  bool is_physical_unital() const { return (d.array() >= 0.0).all() && c.isZero(0.0); }
  std::string tag() const;
};

/// General affine Bloch generator a_dot = lambda a + c.
struct AffineGenerator {
  Mat3 lambda = Mat3::Zero();
  Vec3 c = Vec3::Zero();

  static AffineGenerator from_model(const GkslModel& model);
};

enum class BoundaryPolicy { kReject, kProject };

/// Radius noisy samples are pulled back to under BoundaryPolicy::kProject.
inline constexpr double kProjectionRadius = 1.0 - 1e-9;

std::string to_string(BoundaryPolicy policy);
BoundaryPolicy parse_boundary_policy(const std::string& text);

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
  BoundaryPolicy boundary_policy = BoundaryPolicy::kProject;
};

struct TrajectoryMeta {
  std::string model;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  BoundaryPolicy boundary_policy = BoundaryPolicy::kProject;
  std::size_t n_projected = 0;
};

/// Uniformly sampled Bloch time series.
struct Trajectory {
  std::vector<double> t;
  std::vector<Vec3> a;
  /// Model velocities at each node; absent for noisy or imported data.
  std::optional<std::vector<Vec3>> v_exact;
  TrajectoryMeta meta;

  std::size_t size() const { return a.size(); }
  /// Grid spacing; throws std::invalid_argument on fewer than 2 samples or a
  /// non-uniform grid (relative tolerance 1e-9).
  double uniform_dt() const;
};

Vec3 bloch_rhs(const GkslModel& model, const Vec3& a);
Vec3 bloch_rhs(const AffineGenerator& generator, const Vec3& a);

/// One classical RK4 step.
Vec3 rk4_step(const GkslModel& model, const Vec3& a, double dt);
Vec3 rk4_step(const AffineGenerator& generator, const Vec3& a, double dt);

/// Fixed-step RK4 from a0 over n_steps steps, n_steps + 1 samples with exact
/// velocities. Throws BoundaryError if the state reaches |a| >= 1 after t = 0.
Trajectory integrate(const GkslModel& model, const BlochVector& a0, double dt, std::size_t n_steps);
Trajectory integrate(const AffineGenerator& generator, const BlochVector& a0, double dt,
                     std::size_t n_steps);

/// Adds i.i.d. N(0, sigma^2) measurement noise to every Bloch component.
/// The stream is GaussianStream(stream_seed(noise.seed, stream_index)); exact
/// velocities are dropped. Samples with |a| > kProjectionRadius are projected
/// radially (counted in meta.n_projected) or, under kReject, raise BoundaryError.
Trajectory add_noise(const Trajectory& traj, const NoiseSpec& noise, std::uint64_t stream_index = 0);

}  // namespace igtomo

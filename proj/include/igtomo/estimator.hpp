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

// Non-iterative BKM-weighted linear regression of GKSL parameters.
//
// The Bloch velocity is linear in p = (e1, e2, e3, d1, d2, d3[, c1, c2, c3]):
// v_model = H(a) p. Minimising sum_t (v_ob - H p)^T G^{-1}(a) (v_ob - H p)
// gives the normal equations A p* = b with
//   A = sum_t H^T G^{-1} H,   b = sum_t H^T G^{-1} v_ob.
// Accumulators are monoids: merging per-shard sums reproduces sequential
// accumulation up to floating-point reassociation.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "igtomo/gksl_dynamics.hpp"
#include "igtomo/kernels.hpp"
#include "igtomo/trajectory_io.hpp"

namespace igtomo {

enum class EstimatorMode { kStandard, kExtended };

int parameter_count(EstimatorMode mode);
std::string to_string(EstimatorMode mode);
EstimatorMode parse_estimator_mode(const std::string& text);

enum class VelocitySource { kExact, kFiniteDifference };

std::string to_string(VelocitySource source);
VelocitySource parse_velocity_source(const std::string& text);

class ParameterVector {
 public:
  explicit ParameterVector(EstimatorMode mode = EstimatorMode::kStandard);
  ParameterVector(EstimatorMode mode, const Eigen::VectorXd& values);
  static ParameterVector from_model(const GkslModel& model, EstimatorMode mode);

  EstimatorMode mode() const { return mode_; }
  const Eigen::VectorXd& values() const { return values_; }
  Vec3 e() const { return values_.segment<3>(0); }
  Vec3 d() const { return values_.segment<3>(3); }
  /// Zero in standard mode.
  Vec3 c() const;
  GkslModel to_model() const;

 private:
  EstimatorMode mode_;
  Eigen::VectorXd values_;
};

using DesignMatrix = Eigen::Matrix<double, 3, Eigen::Dynamic, 0, 3, kernels::kMaxParams>;

/// H(a) with H p = 2 e x a - 2 diag(d) a (+ c in extended mode).
DesignMatrix design_matrix(const Vec3& a, EstimatorMode mode);

struct MitigationPolicy {
  double eps_excl = 1e-3;
  std::optional<double> weight_cap;

  /// Throws std::invalid_argument unless eps_excl in (0, 1) and cap >= 1.
  void validate() const;
  kernels::WeightPolicy weights() const;
};

/// Second-order finite-difference velocities: central in the interior,
/// three-point one-sided at both ends. Needs >= 3 uniformly spaced samples.
std::vector<Vec3> velocity_from_samples(const Trajectory& traj);

Vec3 residual_velocity(const ParameterVector& p, const Vec3& a, const Vec3& a_dot);

/// J2 = dv^T G^{-1}(a) dv.
double sample_loss(const ParameterVector& p, const BlochVector& a, const Vec3& a_dot);

class NormalAccumulator {
 public:
  explicit NormalAccumulator(EstimatorMode mode = EstimatorMode::kStandard);

  EstimatorMode mode() const { return mode_; }
  std::int64_t n_samples() const { return sums_.n_included; }
  std::int64_t n_excluded() const { return sums_.n_excluded; }

  void add(const Vec3& a, const Vec3& a_dot, const MitigationPolicy& policy);
  void add(const kernels::SampleBlock& samples, const MitigationPolicy& policy);
  void add(const kernels::SampleBlock& samples, const MitigationPolicy& policy, kernels::Isa isa);
  /// Throws std::invalid_argument when the modes differ.
  void merge(const NormalAccumulator& other);

  Eigen::MatrixXd matrix() const;
  Eigen::VectorXd rhs() const;
  double weighted_velocity_norm() const { return sums_.vwv; }

  /// L(p) = sum v^T W v - 2 p.b + p^T A p, clamped at zero.
  double loss_at(const Eigen::VectorXd& p) const;

 private:
  EstimatorMode mode_;
  kernels::NormalSums sums_;
};

/// Functional form of NormalAccumulator::add.
NormalAccumulator accumulate(NormalAccumulator acc, const Vec3& a, const Vec3& a_dot,
                             const MitigationPolicy& policy);

/// Samples are split into fixed shards of kShardSize, accumulated
/// independently and merged in shard order, so the result does not depend on
/// `threads`.
inline constexpr std::size_t kShardSize = 4096;
NormalAccumulator accumulate_samples(const kernels::SampleBuffer& samples, EstimatorMode mode,
                                     const MitigationPolicy& policy, unsigned threads = 1);

/// Concatenates (a, v) pairs trajectory by trajectory. kExact requires
/// v_exact on every trajectory.
kernels::SampleBuffer collect_samples(const std::vector<Trajectory>& trajs, VelocitySource source);

/// Time-major interleave: sample k of every trajectory before sample k + 1.
kernels::SampleBuffer collect_samples_interleaved(const std::vector<Trajectory>& trajs,
                                                  VelocitySource source);

inline constexpr double kMaxConditionNumber = 1e12;
inline constexpr double kPseudoInverseCutoff = 1e-12;

struct EstimateReport {
  ParameterVector p_star;
  double loss = 0.0;
  double condition_number = 0.0;
  bool rank_deficient = false;
  std::int64_t n_samples = 0;
  std::int64_t n_excluded = 0;
};

/// Cholesky solve of A p* = b; eigenvalue pseudo-inverse (cutoff
/// 1e-12 lambda_max) and rank_deficient = true when cond(A) > 1e12 or the
/// factorisation fails. Throws std::invalid_argument with no samples.
EstimateReport solve(const NormalAccumulator& acc);

KeyValues report_key_values(const EstimateReport& report);

/// Powers of two up to `total`, followed by `total` itself.
std::vector<std::size_t> power_of_two_schedule(std::size_t total);

struct ConvergencePoint {
  std::size_t n_points = 0;
  EstimateReport report;
};

struct ConvergenceOptions {
  EstimatorMode mode = EstimatorMode::kStandard;
  VelocitySource velocity = VelocitySource::kExact;
  /// Empty: power_of_two_schedule. Entries beyond the data size are dropped.
  std::vector<std::size_t> checkpoints;
};

/// Replays accumulation in time order over the interleaved samples and solves
/// at every checkpoint. n_points counts samples considered (included or
/// excluded). Rank-deficient prefixes are flagged, not fatal.
std::vector<ConvergencePoint> convergence_series(const std::vector<Trajectory>& trajs,
                                                 const MitigationPolicy& policy,
                                                 const ConvergenceOptions& options);

/// n_points,e1,e2,e3,d1,d2,d3[,c1,c2,c3],loss,cond,rank_deficient
void write_convergence_csv(std::ostream& os, const std::vector<ConvergencePoint>& points);

}  // namespace igtomo

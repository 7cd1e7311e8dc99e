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

#include "igtomo/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "igtomo/bkm_geometry.hpp"

namespace igtomo {

int parameter_count(EstimatorMode mode) { return mode == EstimatorMode::kExtended ? 9 : 6; }

std::string to_string(EstimatorMode mode) {
  return mode == EstimatorMode::kExtended ? "extended" : "standard";
}

EstimatorMode parse_estimator_mode(const std::string& text) {
  if (text == "standard") return EstimatorMode::kStandard;
  if (text == "extended") return EstimatorMode::kExtended;
  throw ConfigError("unknown estimator mode '" + text + "' (expected standard|extended)");
}

std::string to_string(VelocitySource source) {
  return source == VelocitySource::kExact ? "exact" : "finite-difference";
}

VelocitySource parse_velocity_source(const std::string& text) {
  if (text == "exact") return VelocitySource::kExact;
  if (text == "finite-difference" || text == "fd") return VelocitySource::kFiniteDifference;
  throw ConfigError("unknown velocity source '" + text + "' (expected exact|finite-difference)");
}

// --- ParameterVector -------------------------------------------------------

ParameterVector::ParameterVector(EstimatorMode mode)
    : mode_(mode), values_(Eigen::VectorXd::Zero(parameter_count(mode))) {}

ParameterVector::ParameterVector(EstimatorMode mode, const Eigen::VectorXd& values)
    : mode_(mode), values_(values) {
  if (values.size() != parameter_count(mode)) {
    throw std::invalid_argument("ParameterVector: expected " +
                                std::to_string(parameter_count(mode)) + " values");
  }
}

ParameterVector ParameterVector::from_model(const GkslModel& model, EstimatorMode mode) {
  ParameterVector p(mode);
  p.values_.segment<3>(0) = model.e;
  p.values_.segment<3>(3) = model.d;
  if (mode == EstimatorMode::kExtended) p.values_.segment<3>(6) = model.c;
  return p;
}

Vec3 ParameterVector::c() const {
  return mode_ == EstimatorMode::kExtended ? Vec3(values_.segment<3>(6)) : Vec3::Zero();
}

GkslModel ParameterVector::to_model() const {
  GkslModel m;
  m.e = e();
  m.d = d();
  m.c = c();
  return m;
}

// --- per-sample quantities -------------------------------------------------

DesignMatrix design_matrix(const Vec3& a, EstimatorMode mode) {
  DesignMatrix h = DesignMatrix::Zero(3, parameter_count(mode));
  const double a1 = a[0], a2 = a[1], a3 = a[2];
  h(0, 1) = 2.0 * a3;
  h(0, 2) = -2.0 * a2;
  h(0, 3) = -2.0 * a1;
  h(1, 0) = -2.0 * a3;
  h(1, 2) = 2.0 * a1;
  h(1, 4) = -2.0 * a2;
  h(2, 0) = 2.0 * a2;
  h(2, 1) = -2.0 * a1;
  h(2, 5) = -2.0 * a3;
  if (mode == EstimatorMode::kExtended) h.rightCols<3>().setIdentity();
  return h;
}

void MitigationPolicy::validate() const {
  if (!(eps_excl > 0.0 && eps_excl < 1.0)) {
    throw std::invalid_argument("MitigationPolicy: eps_excl must lie in (0, 1)");
  }
  if (weight_cap && !(*weight_cap >= 1.0)) {
    throw std::invalid_argument("MitigationPolicy: weight_cap must be >= 1");
  }
}

kernels::WeightPolicy MitigationPolicy::weights() const {
  validate();
  kernels::WeightPolicy w;
  w.eps_excl = eps_excl;
  w.weight_cap = weight_cap.value_or(0.0);
  return w;
}

std::vector<Vec3> velocity_from_samples(const Trajectory& traj) {
  const std::size_t n = traj.size();
  if (n < 3) {
    throw std::invalid_argument("velocity_from_samples: need at least 3 samples");
  }
  const double dt = traj.uniform_dt();
  const double inv2dt = 1.0 / (2.0 * dt);
  const auto& a = traj.a;
  std::vector<Vec3> v(n);
  v[0] = (-3.0 * a[0] + 4.0 * a[1] - a[2]) * inv2dt;
  for (std::size_t k = 1; k + 1 < n; ++k) v[k] = (a[k + 1] - a[k - 1]) * inv2dt;
  v[n - 1] = (3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) * inv2dt;
  return v;
}

Vec3 residual_velocity(const ParameterVector& p, const Vec3& a, const Vec3& a_dot) {
  return a_dot - design_matrix(a, p.mode()) * p.values();
}

double sample_loss(const ParameterVector& p, const BlochVector& a, const Vec3& a_dot) {
  const Vec3 dv = residual_velocity(p, a.vec(), a_dot);
  return dv.dot(inverse_metric(a) * dv);
}

// --- NormalAccumulator -----------------------------------------------------

NormalAccumulator::NormalAccumulator(EstimatorMode mode) : mode_(mode) {
  sums_.n_params = parameter_count(mode);
}

void NormalAccumulator::add(const Vec3& a, const Vec3& a_dot, const MitigationPolicy& policy) {
  kernels::SampleBlock one;
  for (int i = 0; i < 3; ++i) {
    one.a[i] = std::span<const double>(&a[i], 1);
    one.v[i] = std::span<const double>(&a_dot[i], 1);
  }
  kernels::accumulate_normal(kernels::Isa::kScalar, one, policy.weights(), sums_);
}

void NormalAccumulator::add(const kernels::SampleBlock& samples, const MitigationPolicy& policy) {
  add(samples, policy, kernels::active_isa());
}

void NormalAccumulator::add(const kernels::SampleBlock& samples, const MitigationPolicy& policy,
                            kernels::Isa isa) {
  kernels::accumulate_normal(isa, samples, policy.weights(), sums_);
}

void NormalAccumulator::merge(const NormalAccumulator& other) {
  if (other.mode_ != mode_) {
    throw std::invalid_argument("NormalAccumulator::merge: estimator modes differ");
  }
  for (std::size_t i = 0; i < sums_.a.size(); ++i) sums_.a[i] += other.sums_.a[i];
  for (std::size_t i = 0; i < sums_.b.size(); ++i) sums_.b[i] += other.sums_.b[i];
  sums_.vwv += other.sums_.vwv;
  sums_.n_included += other.sums_.n_included;
  sums_.n_excluded += other.sums_.n_excluded;
}

Eigen::MatrixXd NormalAccumulator::matrix() const {
  const int k = sums_.n_params;
  Eigen::MatrixXd a(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) a(i, j) = a(j, i) = sums_.upper(i, j);
  }
  return a;
}

Eigen::VectorXd NormalAccumulator::rhs() const {
  Eigen::VectorXd b(sums_.n_params);
  for (int i = 0; i < sums_.n_params; ++i) b[i] = sums_.b[i];
  return b;
}

double NormalAccumulator::loss_at(const Eigen::VectorXd& p) const {
  const double value = sums_.vwv - 2.0 * p.dot(rhs()) + p.dot(matrix() * p);
  return std::max(0.0, value);
}

NormalAccumulator accumulate(NormalAccumulator acc, const Vec3& a, const Vec3& a_dot,
                             const MitigationPolicy& policy) {
  acc.add(a, a_dot, policy);
  return acc;
}

NormalAccumulator accumulate_samples(const kernels::SampleBuffer& samples, EstimatorMode mode,
                                     const MitigationPolicy& policy, unsigned threads) {
  policy.validate();
  const std::size_t n = samples.size();
  const std::size_t n_shards = (n + kShardSize - 1) / kShardSize;
  std::vector<NormalAccumulator> shards(n_shards, NormalAccumulator(mode));
  const kernels::Isa isa = kernels::active_isa();

  auto run = [&](std::size_t first, std::size_t stride) {
    for (std::size_t s = first; s < n_shards; s += stride) {
      const std::size_t begin = s * kShardSize;
      const std::size_t end = std::min(n, begin + kShardSize);
      shards[s].add(samples.block(begin, end), policy, isa);
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n_shards));
  if (workers <= 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
    for (auto& t : pool) t.join();
  }

  NormalAccumulator total(mode);
  for (const auto& shard : shards) total.merge(shard);
  return total;
}

namespace {

const std::vector<Vec3>& exact_velocities(const Trajectory& traj) {
  if (!traj.v_exact) {
    throw std::invalid_argument("exact velocities requested but the trajectory has none");
  }
  return *traj.v_exact;
}

std::vector<std::vector<Vec3>> velocities_for(const std::vector<Trajectory>& trajs,
                                              VelocitySource source) {
  std::vector<std::vector<Vec3>> out;
  out.reserve(trajs.size());
  for (const auto& traj : trajs) {
    out.push_back(source == VelocitySource::kExact ? exact_velocities(traj)
                                                   : velocity_from_samples(traj));
  }
  return out;
}

}  // namespace

kernels::SampleBuffer collect_samples(const std::vector<Trajectory>& trajs, VelocitySource source) {
  const auto velocities = velocities_for(trajs, source);
  kernels::SampleBuffer buf;
  std::size_t total = 0;
  for (const auto& traj : trajs) total += traj.size();
  buf.reserve(total);
  for (std::size_t j = 0; j < trajs.size(); ++j) {
    for (std::size_t k = 0; k < trajs[j].size(); ++k) buf.push_back(trajs[j].a[k], velocities[j][k]);
  }
  return buf;
}

kernels::SampleBuffer collect_samples_interleaved(const std::vector<Trajectory>& trajs,
                                                  VelocitySource source) {
  const auto velocities = velocities_for(trajs, source);
  kernels::SampleBuffer buf;
  std::size_t total = 0;
  std::size_t longest = 0;
  for (const auto& traj : trajs) {
    total += traj.size();
    longest = std::max(longest, traj.size());
  }
  buf.reserve(total);
  for (std::size_t k = 0; k < longest; ++k) {
    for (std::size_t j = 0; j < trajs.size(); ++j) {
      if (k < trajs[j].size()) buf.push_back(trajs[j].a[k], velocities[j][k]);
    }
  }
  return buf;
}

// --- solving ---------------------------------------------------------------

EstimateReport solve(const NormalAccumulator& acc) {
  if (acc.n_samples() < 1) {
    throw std::invalid_argument("solve: the accumulator holds no included samples");
  }
  const Eigen::MatrixXd a = acc.matrix();
  const Eigen::VectorXd b = acc.rhs();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const Eigen::VectorXd lambda = es.eigenvalues();  // ascending
  const double lambda_max = lambda.cwiseAbs().maxCoeff();
  const double lambda_min = lambda.minCoeff();

  EstimateReport report{ParameterVector(acc.mode())};
  report.n_samples = acc.n_samples();
  report.n_excluded = acc.n_excluded();
  report.condition_number =
      lambda_min > 0.0 ? lambda_max / lambda_min : std::numeric_limits<double>::infinity();

  Eigen::VectorXd p;
  bool solved = false;
  if (report.condition_number <= kMaxConditionNumber) {
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) {
      p = llt.solve(b);
      solved = p.allFinite();
    }
  }
  if (!solved) {
    report.rank_deficient = true;
    p = Eigen::VectorXd::Zero(a.rows());
    const double cutoff = kPseudoInverseCutoff * lambda_max;
    const Eigen::MatrixXd& u = es.eigenvectors();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      if (lambda[i] > cutoff) p += (u.col(i).dot(b) / lambda[i]) * u.col(i);
    }
  }
  report.p_star = ParameterVector(acc.mode(), p);
  report.loss = acc.loss_at(p);
  return report;
}

KeyValues report_key_values(const EstimateReport& report) {
  static const char* kNames[] = {"e1", "e2", "e3", "d1", "d2", "d3", "c1", "c2", "c3"};
  KeyValues kv;
  kv.emplace_back("mode", to_string(report.p_star.mode()));
  const auto& values = report.p_star.values();
  for (Eigen::Index i = 0; i < values.size(); ++i) kv.emplace_back(kNames[i], format_real(values[i]));
  kv.emplace_back("loss", format_real(report.loss));
  kv.emplace_back("condition_number", format_real(report.condition_number));
  kv.emplace_back("rank_deficient", report.rank_deficient ? "1" : "0");
  kv.emplace_back("n_samples", std::to_string(report.n_samples));
  kv.emplace_back("n_excluded", std::to_string(report.n_excluded));
  return kv;
}

// --- convergence -------------------------------------------------------------

std::vector<std::size_t> power_of_two_schedule(std::size_t total) {
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n < total; n *= 2) out.push_back(n);
  if (total > 0) out.push_back(total);
  return out;
}

std::vector<ConvergencePoint> convergence_series(const std::vector<Trajectory>& trajs,
                                                 const MitigationPolicy& policy,
                                                 const ConvergenceOptions& options) {
  if (trajs.empty()) {
    throw std::invalid_argument("convergence_series: need at least one trajectory");
  }
  const kernels::SampleBuffer samples = collect_samples_interleaved(trajs, options.velocity);
  const std::size_t n = samples.size();

  std::vector<std::size_t> schedule =
      options.checkpoints.empty() ? power_of_two_schedule(n) : options.checkpoints;
  std::sort(schedule.begin(), schedule.end());
  schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());
  std::erase_if(schedule, [n](std::size_t c) { return c == 0 || c > n; });

  std::vector<ConvergencePoint> out;
  NormalAccumulator acc(options.mode);
  std::size_t done = 0;
  for (const std::size_t checkpoint : schedule) {
    acc.add(samples.block(done, checkpoint), policy);
    done = checkpoint;
    ConvergencePoint point;
    point.n_points = checkpoint;
    if (acc.n_samples() > 0) {
      point.report = solve(acc);
    } else {
      point.report.rank_deficient = true;
      point.report.p_star = ParameterVector(options.mode);
      point.report.condition_number = std::numeric_limits<double>::infinity();
      point.report.n_excluded = acc.n_excluded();
    }
    out.push_back(std::move(point));
  }
  return out;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergencePoint>& points) {
  const bool extended =
      !points.empty() && points.front().report.p_star.mode() == EstimatorMode::kExtended;
  os << "n_points,e1,e2,e3,d1,d2,d3" << (extended ? ",c1,c2,c3" : "")
     << ",loss,cond,rank_deficient\n";
  for (const auto& point : points) {
    os << point.n_points;
    for (const double x : point.report.p_star.values()) os << ',' << format_real(x);
    os << ',' << format_real(point.report.loss) << ',' << format_real(point.report.condition_number)
       << ',' << (point.report.rank_deficient ? 1 : 0) << '\n';
  }
}

}  // namespace igtomo

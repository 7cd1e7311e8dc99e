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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and runtime bounds are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "igtomo/bkm_geometry.hpp"
#include "igtomo/cli.hpp"
#include "igtomo/estimator.hpp"
#include "igtomo/identity_verifier.hpp"
#include "igtomo/lindblad_generator.hpp"
#include "oracle.hpp"

namespace igtomo {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;
};

GkslModel reference_model() {
  GkslModel m;
  m.e = Vec3(1.0, -0.6, 0.4);
  m.d = Vec3(0.2, 0.3, 0.1);
  return m;
}

const Vec3 kStart(0.815, -0.007, 0.466);

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, x);
  return buf;
}

double max_relative_error(const ParameterVector& p, const ParameterVector& truth) {
  return ((p.values() - truth.values()).cwiseAbs().array() / truth.values().cwiseAbs().array())
      .maxCoeff();
}

// 1. metric * inverse = I to 1e-12; metric = FD Hessian of psi (h = 1e-4) to relative 1e-5.
Outcome metric_correctness() {
  std::mt19937_64 gen(1001);
  double worst_inv = 0.0, worst_hess = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec3 a = oracle::random_state(gen, 0.05, 0.95);
    const BlochVector s(a);
    const Mat3 g = metric(s);
    worst_inv = std::max(worst_inv, (g * inverse_metric(s) - Mat3::Identity()).cwiseAbs().maxCoeff());
    const Mat3 fd = oracle::psi_hessian(oracle::natural_of(a), 1e-4);
    worst_hess = std::max(worst_hess, (g - fd).norm() / g.norm());
  }
  return {worst_inv <= 1e-12 && worst_hess <= 1e-5,
          "max |G G^-1 - I| = " + fmt("%.3g", worst_inv) + ", max rel |G - Hess psi| = " +
              fmt("%.3g", worst_hess)};
}

// 2. Kubo-Mori covariance equals the closed-form metric to 1e-10.
Outcome bkm_equals_covariance() {
  std::mt19937_64 gen(1002);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const BlochVector a(oracle::random_state(gen, 0.05, 0.95));
    worst = std::max(worst, (covariance_matrix(a) - metric(a)).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-10, "max |Xi - G| = " + fmt("%.3g", worst)};
}

// 3. Identity saturation along the reference trajectory.
Outcome identity_saturation() {
  const GkslModel m = reference_model();
  const Trajectory traj = integrate(m, BlochVector(kStart), 1e-3, 10000);
  const OrderCheck check = check_order(m, traj, 1e-4);
  const double gap = check.coarse.max_err_gen_fd;
  const double gksl = check.coarse.max_err_gksl_gen;
  const bool halves = check.ratio >= 1.6 && check.ratio <= 2.4;
  return {gap <= 1e-3 && halves && gksl <= 1e-10 && check.coarse.n_excluded == 0,
          "max gap(dt_fd=1e-4) = " + fmt("%.4g", gap) + ", ratio on halving = " +
              fmt("%.4f", check.ratio) + ", max |gksl - general| rel = " + fmt("%.3g", gksl)};
}

// 4. Noiseless recovery: exact velocities to 1e-8, FD velocities (dt = 1e-3) to 1e-4.
Outcome noiseless_recovery() {
  const GkslModel m = reference_model();
  const auto truth = ParameterVector::from_model(m, EstimatorMode::kStandard);
  const Trajectory short_traj = integrate(m, BlochVector(kStart), 1e-3, 199);
  const auto exact = solve(accumulate_samples(collect_samples({short_traj}, VelocitySource::kExact),
                                              EstimatorMode::kStandard, MitigationPolicy{}));
  Trajectory long_traj = integrate(m, BlochVector(kStart), 1e-3, 10000);
  long_traj.v_exact.reset();
  const auto fd = solve(accumulate_samples(
      collect_samples({long_traj}, VelocitySource::kFiniteDifference), EstimatorMode::kStandard,
      MitigationPolicy{}));
  const double e_exact = max_relative_error(exact.p_star, truth);
  const double e_fd = max_relative_error(fd.p_star, truth);
  return {e_exact <= 1e-8 && e_fd <= 1e-4 && !exact.rank_deficient && !fd.rank_deficient,
          "exact (200 samples) max rel err = " + fmt("%.3g", e_exact) +
              ", finite-difference max rel err = " + fmt("%.3g", e_fd)};
}

// 5. Noisy convergence, sigma = 1e-3, 32 seeds, finite-difference velocities.
Outcome noisy_convergence() {
  const GkslModel m = reference_model();
  const auto truth = ParameterVector::from_model(m, EstimatorMode::kStandard).values();
  const Trajectory clean = integrate(m, BlochVector(kStart), 1e-3, 10000);
  const int n_seeds = 32;

  std::vector<std::vector<ConvergencePoint>> runs;
  for (int seed = 0; seed < n_seeds; ++seed) {
    const Trajectory noisy =
        add_noise(clean, NoiseSpec{1e-3, static_cast<std::uint64_t>(seed), BoundaryPolicy::kProject});
    ConvergenceOptions opt;
    opt.velocity = VelocitySource::kFiniteDifference;
    runs.push_back(convergence_series({noisy}, MitigationPolicy{}, opt));
  }
  const std::size_t n_cp = runs.front().size();

  // Checkpoints that are full rank for every seed.
  std::vector<std::size_t> usable;
  for (std::size_t c = 0; c < n_cp; ++c) {
    bool ok = true;
    for (const auto& r : runs) ok = ok && !r[c].report.rank_deficient;
    if (ok) usable.push_back(c);
  }
  if (usable.size() < 3) return {false, "fewer than three full-rank checkpoints"};

  // (a) seed-averaged mean relative error, allowed to rise by at most 10% per step.
  std::vector<double> mae;
  for (std::size_t c : usable) {
    double s = 0.0;
    for (const auto& r : runs) {
      s += ((r[c].report.p_star.values() - truth).cwiseAbs().array() / truth.cwiseAbs().array()).mean();
    }
    mae.push_back(s / n_seeds);
  }
  double worst_step = 0.0;
  for (std::size_t i = 1; i < mae.size(); ++i) worst_step = std::max(worst_step, mae[i] / mae[i - 1]);
  const bool a_ok = worst_step <= 1.1 && mae.back() < mae.front();

  // (b) per-seed std over usable checkpoints of p_i / |p_i|, averaged over seeds.
  Eigen::VectorXd fluct = Eigen::VectorXd::Zero(6);
  for (const auto& r : runs) {
    for (int i = 0; i < 6; ++i) {
      double mean = 0.0, sq = 0.0;
      for (std::size_t c : usable) mean += r[c].report.p_star.values()[i];
      mean /= static_cast<double>(usable.size());
      for (std::size_t c : usable) {
        const double dv = r[c].report.p_star.values()[i] - mean;
        sq += dv * dv;
      }
      fluct[i] += std::sqrt(sq / static_cast<double>(usable.size())) / std::abs(truth[i]);
    }
  }
  fluct /= n_seeds;
  const double e_fluct = fluct.head<3>().mean();
  const double d_fluct = fluct.tail<3>().mean();
  const bool b_ok = d_fluct > e_fluct;

  // (c) bias of the seed mean at the final checkpoint, e-parameters within 5%.
  Eigen::VectorXd final_mean = Eigen::VectorXd::Zero(6);
  for (const auto& r : runs) final_mean += r.back().report.p_star.values();
  final_mean /= n_seeds;
  const Eigen::VectorXd bias =
      (final_mean - truth).cwiseAbs().array() / truth.cwiseAbs().array();
  const double e_bias = bias.head<3>().maxCoeff();
  const bool c_ok = e_bias <= 0.05;

  return {a_ok && b_ok && c_ok,
          "(a) worst step ratio = " + fmt("%.3f", worst_step) + " over " +
              std::to_string(usable.size()) + " checkpoints, MAE " + fmt("%.3g", mae.front()) +
              " -> " + fmt("%.3g", mae.back()) + "; (b) fluctuation e = " + fmt("%.3g", e_fluct) +
              ", d = " + fmt("%.3g", d_fluct) + "; (c) max e bias = " + fmt("%.3g", e_bias) +
              " (d bias " + fmt("%.3g", bias.tail<3>().maxCoeff()) + ")"};
}

// 6. Affine term of the Lindblad conversion.
Outcome lindblad_affine() {
  // Hermitian jumps: c = 0.
  LindbladSpec herm = LindbladSpec::from_hamiltonian_vector(Vec3(0.3, -0.2, 0.1));
  herm.jumps = {{pauli(0), 0.1}, {pauli(2), 0.4}};
  const double c_herm = lindblad_to_bloch_generator(herm).c.norm();

  // Single sigma_- jump: |c| = gamma / 2 along z.
  const double gamma = 0.8;
  LindbladSpec amp;
  amp.jumps = {{sigma_minus(), gamma}};
  const Vec3 c_amp = lindblad_to_bloch_generator(amp).c;
  const bool along_z = std::hypot(c_amp[0], c_amp[1]) <= 1e-15;
  const bool half_gamma = std::abs(c_amp.norm() - 0.5 * gamma) <= 1e-12;

  // Diagonal dissipation round trip against the model integrator.
  GkslModel m = reference_model();
  const double g1 = 0.05, g2 = 0.1, g3 = 0.15;
  m.d = Vec3(g2 + g3, g1 + g3, g1 + g2);
  LindbladSpec diag = LindbladSpec::from_hamiltonian_vector(m.e);
  diag.jumps = {{pauli(0), g1}, {pauli(1), g2}, {pauli(2), g3}};
  const Trajectory via_spec = integrate(lindblad_to_bloch_generator(diag), BlochVector(kStart), 1e-3, 2000);
  const Trajectory via_model = integrate(m, BlochVector(kStart), 1e-3, 2000);
  double round_trip = 0.0;
  for (std::size_t k = 0; k < via_spec.size(); ++k) {
    round_trip = std::max(round_trip, (via_spec.a[k] - via_model.a[k]).norm());
  }

  return {c_herm <= 1e-15 && along_z && half_gamma && round_trip <= 1e-10,
          "Hermitian |c| = " + fmt("%.3g", c_herm) + "; sigma_- c_z = " + fmt("%.6g", c_amp[2]) +
              " for gamma = " + fmt("%.3g", gamma) + " (|c|/gamma = " +
              fmt("%.6g", c_amp.norm() / gamma) + ", required 0.5)" +
              "; diagonal round trip = " + fmt("%.3g", round_trip)};
}

// 7. Purity monotonicity and confinement for random physical unital models.
Outcome purity_monotone() {
  std::mt19937_64 gen(1007);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> rate(0.0, 0.5);
  double worst_rise = 0.0;
  double max_radius = 0.0;
  for (int i = 0; i < 100; ++i) {
    GkslModel m;
    m.e = Vec3(u(gen), u(gen), u(gen));
    m.d = Vec3(rate(gen), rate(gen), rate(gen));
    const Trajectory traj = integrate(m, BlochVector(oracle::random_state(gen, 0.0, 0.999)), 1e-2, 1000);
    for (std::size_t k = 1; k < traj.size(); ++k) {
      const double p0 = 0.5 * (1.0 + traj.a[k - 1].squaredNorm());
      const double p1 = 0.5 * (1.0 + traj.a[k].squaredNorm());
      worst_rise = std::max(worst_rise, p1 - p0);
      max_radius = std::max(max_radius, traj.a[k].norm());
    }
  }
  return {worst_rise <= 1e-15 && max_radius < 1.0,
          "max purity increase per step = " + fmt("%.3g", worst_rise) + ", max |a| = " +
              fmt("%.6f", max_radius)};
}

// 8. Byte-identical CLI outputs across repeated runs and thread counts.
std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

bool same_tree(const fs::path& x, const fs::path& y, std::string& why) {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(x)) {
    const fs::path other = y / entry.path().filename();
    ++n;
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      why = entry.path().filename().string();
      return false;
    }
  }
  if (n == 0) why = "no outputs";
  return n > 0;
}

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"igtomo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "igtomo_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path cfg = root / "experiment.cfg";
  std::ofstream(cfg) << "model.e = 1.0 -0.6 0.4\n"
                        "model.d = 0.2 0.3 0.1\n"
                        "initial.states = 0.815 -0.007 0.466 ; -0.3 0.5 0.2\n"
                        "time.dt = 1e-3\n"
                        "time.n_steps = 10000\n"
                        "noise.sigma = 1e-3\n"
                        "noise.seed = 2024\n";
  const fs::path spec = root / "amp.spec";
  std::ofstream(spec) << "hamiltonian.e = 0 0 0.5\njump.decay.op = sigma_minus\njump.decay.rate = 0.3\n";

  struct Case {
    std::string name;
    std::vector<std::string> args_a, args_b;
  };
  auto with_out = [&](std::vector<std::string> a, const std::string& dir) {
    a.push_back("--out");
    a.push_back((root / dir).string());
    return a;
  };
  const std::vector<std::string> base_cfg{"--config", cfg.string()};
  std::vector<Case> cases;
  for (const char* cmd : {"simulate", "convergence", "verify"}) {
    std::vector<std::string> a{cmd};
    a.insert(a.end(), base_cfg.begin(), base_cfg.end());
    cases.push_back({cmd, with_out(a, std::string(cmd) + "_a"), with_out(a, std::string(cmd) + "_b")});
  }
  std::vector<std::string> est{"estimate"};
  est.insert(est.end(), base_cfg.begin(), base_cfg.end());
  auto est1 = est, est4 = est;
  est1.insert(est1.end(), {"--threads", "1"});
  est4.insert(est4.end(), {"--threads", "4"});
  cases.push_back({"estimate(threads 1 vs 4)", with_out(est1, "est_1"), with_out(est4, "est_4")});
  cases.push_back({"estimate(repeat)", with_out(est4, "est_4r"), with_out(est4, "est_4s")});
  const std::vector<std::string> lb{"lindblad", "--spec", spec.string()};
  cases.push_back({"lindblad", with_out(lb, "lb_a"), with_out(lb, "lb_b")});

  std::string failures;
  for (const auto& c : cases) {
    const int ra = cli(c.args_a);
    const int rb = cli(c.args_b);
    std::string why;
    const fs::path da = c.args_a.back();
    const fs::path db = c.args_b.back();
    if (ra != 0 || rb != 0) {
      failures += " " + c.name + "(exit " + std::to_string(ra) + "/" + std::to_string(rb) + ")";
    } else if (!same_tree(da, db, why)) {
      failures += " " + c.name + "(" + why + ")";
    }
  }
  fs::remove_all(root);
  return {failures.empty(), failures.empty() ? std::to_string(cases.size()) +
                                                    " command pairs byte-identical"
                                              : "differences:" + failures};
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace igtomo

int main() {
  using namespace igtomo;
  const std::vector<Criterion> criteria = {
      {1, "metric correctness", 1.0, metric_correctness},
      {2, "BKM metric equals Kubo-Mori covariance", 1.0, bkm_equals_covariance},
      {3, "identity saturation", 5.0, identity_saturation},
      {4, "noiseless recovery", 5.0, noiseless_recovery},
      {5, "noisy convergence", 60.0, noisy_convergence},
      {6, "Lindblad affine term", 1.0, lindblad_affine},
      {7, "purity monotonicity and confinement", 10.0, purity_monotone},
      {8, "CLI determinism", 30.0, cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = out.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.3f s of %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id,
                c.title, out.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

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

#include "igtomo/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "igtomo/config.hpp"
#include "igtomo/estimator.hpp"
#include "igtomo/identity_verifier.hpp"
#include "igtomo/lindblad_generator.hpp"
#include "igtomo/trajectory_io.hpp"

namespace igtomo {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool allow_deficient = false;
  std::string mode;
  std::string velocity;
  std::vector<std::string> files;
  std::string spec;
};

class Context {
 public:
  Context(const Options& opt, std::ostream& out, std::ostream& err)
      : opt_(opt), out_(out), err_(err) {}

  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }
  const Options& opt() const { return opt_; }

  ExperimentConfig config() const {
    if (opt_.config.empty()) throw ConfigError("--config is required for this command");
    ExperimentConfig cfg = load_config(opt_.config);
    if (opt_.seed) cfg.noise.seed = *opt_.seed;
    if (opt_.threads) cfg.threads = *opt_.threads;
    if (!opt_.mode.empty()) cfg.mode = parse_estimator_mode(opt_.mode);
    if (!opt_.velocity.empty()) cfg.velocity = parse_velocity_source(opt_.velocity);
    return cfg;
  }

  fs::path out_dir(const std::string& from_config) const {
    fs::path dir;
    if (!opt_.out.empty()) {
      dir = opt_.out;
    } else if (!from_config.empty()) {
      dir = from_config;
    } else if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
      dir = env;
    } else {
      dir = kDefaultOutDir;
    }
    fs::create_directories(dir);
    return dir;
  }

 private:
  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
};

struct Datasets {
  std::vector<Trajectory> clean;
  std::vector<Trajectory> noisy;  // empty when sigma = 0
};

Datasets simulate(const ExperimentConfig& cfg) {
  Datasets ds;
  for (std::size_t i = 0; i < cfg.initial_states.size(); ++i) {
    Trajectory traj = integrate(cfg.model, BlochVector(cfg.initial_states[i]), cfg.dt, cfg.n_steps);
    traj.meta.seed = cfg.noise.seed;
    traj.meta.boundary_policy = cfg.noise.boundary_policy;
    ds.clean.push_back(std::move(traj));
  }
  if (cfg.noise.sigma > 0.0) {
    for (std::size_t i = 0; i < ds.clean.size(); ++i) {
      ds.noisy.push_back(add_noise(ds.clean[i], cfg.noise, i));
    }
  }
  return ds;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

void write_resolved(const fs::path& dir, const ExperimentConfig& cfg) {
  write_key_values(dir / "config.resolved", cfg.resolved());
}

std::string trajectory_name(std::size_t i, const char* variant) {
  return "traj_" + std::to_string(i) + "_" + variant;
}

void save_trajectory(const fs::path& dir, const std::string& stem, const Trajectory& traj) {
  write_trajectory_csv(dir / (stem + ".csv"), traj);
  write_key_values(dir / (stem + ".meta"), trajectory_metadata(traj));
}

bool all_have_velocities(const std::vector<Trajectory>& trajs) {
  for (const auto& t : trajs) {
    if (!t.v_exact) return false;
  }
  return true;
}

EstimateReport run_estimate(const std::vector<Trajectory>& trajs, VelocitySource velocity,
                            EstimatorMode mode, const MitigationPolicy& policy, unsigned threads) {
  if (velocity == VelocitySource::kExact && !all_have_velocities(trajs)) {
    throw ConfigError("exact velocities requested but the input has no v1,v2,v3 columns");
  }
  const auto samples = collect_samples(trajs, velocity);
  const auto acc = accumulate_samples(samples, mode, policy, threads);
  if (acc.n_samples() == 0) {
    throw std::invalid_argument("every sample was excluded by the boundary guard");
  }
  return solve(acc);
}

int cmd_simulate(Context& ctx) {
  const ExperimentConfig cfg = ctx.config();
  const Datasets ds = simulate(cfg);
  const fs::path dir = ctx.out_dir(cfg.output_dir);
  for (std::size_t i = 0; i < ds.clean.size(); ++i) {
    save_trajectory(dir, trajectory_name(i, "clean"), ds.clean[i]);
    if (!ds.noisy.empty()) save_trajectory(dir, trajectory_name(i, "noisy"), ds.noisy[i]);
  }
  write_resolved(dir, cfg);
  ctx.out() << "simulate: " << ds.clean.size() << " trajectories of " << cfg.n_steps + 1
            << " samples" << (ds.noisy.empty() ? "" : " (clean and noisy)") << " -> "
            << dir.string() << '\n';
  return kExitOk;
}

int cmd_estimate(Context& ctx) {
  const Options& opt = ctx.opt();
  std::vector<Trajectory> trajs;
  EstimatorMode mode = EstimatorMode::kStandard;
  VelocitySource velocity = VelocitySource::kExact;
  MitigationPolicy policy;
  unsigned threads = opt.threads.value_or(1);
  fs::path dir;
  KeyValues inputs;

  if (!opt.config.empty()) {
    if (!opt.files.empty()) throw ConfigError("give either --config or trajectory files, not both");
    const ExperimentConfig cfg = ctx.config();
    Datasets ds = simulate(cfg);
    mode = cfg.mode;
    policy = cfg.mitigation;
    threads = cfg.threads;
    if (ds.noisy.empty()) {
      trajs = std::move(ds.clean);
      velocity = cfg.velocity;
    } else {
      trajs = std::move(ds.noisy);
      velocity = VelocitySource::kFiniteDifference;
    }
    dir = ctx.out_dir(cfg.output_dir);
    write_resolved(dir, cfg);
  } else {
    if (opt.files.empty()) throw ConfigError("estimate needs --config or at least one trajectory file");
    std::string names;
    for (const auto& f : opt.files) {
      trajs.push_back(read_trajectory_csv(fs::path(f)));
      if (!names.empty()) names += ' ';
      names += fs::path(f).filename().string();
    }
    if (!opt.mode.empty()) mode = parse_estimator_mode(opt.mode);
    velocity = !opt.velocity.empty()         ? parse_velocity_source(opt.velocity)
               : all_have_velocities(trajs) ? VelocitySource::kExact
                                            : VelocitySource::kFiniteDifference;
    dir = ctx.out_dir("");
    inputs = {{"inputs", names},
              {"estimator.mode", to_string(mode)},
              {"estimator.velocity", to_string(velocity)},
              {"mitigation.eps_excl", format_real(policy.eps_excl)}};
    write_key_values(dir / "estimate.inputs", inputs);
  }

  const EstimateReport report = run_estimate(trajs, velocity, mode, policy, threads);
  KeyValues kv = report_key_values(report);
  kv.emplace_back("velocity", to_string(velocity));
  kv.emplace_back("n_trajectories", std::to_string(trajs.size()));
  write_key_values(dir / "estimate.txt", kv);
  write_key_values(ctx.out(), kv);
  if (report.rank_deficient && !opt.allow_deficient) {
    ctx.err() << "estimate: normal equations are rank deficient (condition number "
              << format_real(report.condition_number) << "); rerun with --allow-deficient to accept\n";
    return kExitRank;
  }
  return kExitOk;
}

int cmd_convergence(Context& ctx) {
  const ExperimentConfig cfg = ctx.config();
  const Datasets ds = simulate(cfg);
  const fs::path dir = ctx.out_dir(cfg.output_dir);
  write_resolved(dir, cfg);

  bool deficient_at_end = false;
  auto run = [&](const std::vector<Trajectory>& trajs, VelocitySource velocity, const char* name) {
    ConvergenceOptions options{cfg.mode, velocity, cfg.checkpoints};
    const auto points = convergence_series(trajs, cfg.mitigation, options);
    std::ostringstream csv;
    write_convergence_csv(csv, points);
    write_text(dir / name, csv.str());
    if (!points.empty()) {
      const auto& last = points.back();
      deficient_at_end = deficient_at_end || last.report.rank_deficient;
      ctx.out() << name << ": " << points.size() << " checkpoints, final n_points = " << last.n_points
                << ", loss = " << format_real(last.report.loss) << '\n';
    }
  };
  run(ds.clean, cfg.velocity, "convergence_clean.csv");
  if (!ds.noisy.empty()) run(ds.noisy, VelocitySource::kFiniteDifference, "convergence_noisy.csv");

  if (deficient_at_end && !ctx.opt().allow_deficient) {
    ctx.err() << "convergence: final checkpoint is rank deficient; rerun with --allow-deficient\n";
    return kExitRank;
  }
  return kExitOk;
}

inline constexpr double kOrderRatioLow = 1.6;
inline constexpr double kOrderRatioHigh = 2.4;
inline constexpr double kOrderNoiseFloor = 1e-11;

int cmd_verify(Context& ctx) {
  const ExperimentConfig cfg = ctx.config();
  const Datasets ds = simulate(cfg);
  const fs::path dir = ctx.out_dir(cfg.output_dir);
  write_resolved(dir, cfg);
  const bool gksl_form = cfg.model.c.isZero(0.0);

  KeyValues summary;
  summary.emplace_back("dt_fd", format_real(cfg.verify_dt_fd));
  summary.emplace_back("fd_tolerance", format_real(cfg.verify_fd_tolerance));
  summary.emplace_back("gksl_tolerance", format_real(cfg.verify_gksl_tolerance));
  summary.emplace_back("boundary_margin", format_real(cfg.mitigation.eps_excl));
  bool pass = true;
  for (std::size_t i = 0; i < ds.clean.size(); ++i) {
    const OrderCheck check =
        check_order(cfg.model, ds.clean[i], cfg.verify_dt_fd, cfg.mitigation.eps_excl);
    std::ostringstream csv;
    write_identity_csv(csv, check.coarse);
    write_text(dir / ("identity_" + std::to_string(i) + ".csv"), csv.str());

    const auto& rep = check.coarse;
    bool ok = rep.max_err_gen_fd <= cfg.verify_fd_tolerance;
    if (gksl_form) ok = ok && rep.max_err_gksl_gen <= cfg.verify_gksl_tolerance;
    const bool order_checked = !rep.records.empty() && rep.max_err_gen_fd > kOrderNoiseFloor;
    if (order_checked) {
      ok = ok && check.ratio >= kOrderRatioLow && check.ratio <= kOrderRatioHigh;
    }
    pass = pass && ok;

    const std::string key = "traj_" + std::to_string(i) + ".";
    summary.emplace_back(key + "n_checked", std::to_string(rep.records.size()));
    summary.emplace_back(key + "n_excluded", std::to_string(rep.n_excluded));
    summary.emplace_back(key + "max_err_gen_fd", format_real(rep.max_err_gen_fd));
    summary.emplace_back(key + "max_err_gksl_gen",
                         gksl_form ? format_real(rep.max_err_gksl_gen) : std::string("n/a"));
    summary.emplace_back(key + "order_ratio",
                         order_checked ? format_real(check.ratio) : std::string("n/a"));
    summary.emplace_back(key + "status", ok ? "pass" : "fail");
  }
  summary.emplace_back("status", pass ? "pass" : "fail");
  write_key_values(dir / "verify_summary.txt", summary);
  write_key_values(ctx.out(), summary);
  return pass ? kExitOk : kExitFailure;
}

int cmd_lindblad(Context& ctx) {
  const Options& opt = ctx.opt();
  if (opt.spec.empty()) throw ConfigError("lindblad needs --spec PATH");
  const LindbladSpec spec = parse_lindblad_spec(read_key_values(fs::path(opt.spec)));
  const AffineGenerator gen = lindblad_to_bloch_generator(spec);

  KeyValues kv;
  kv.emplace_back("convention", std::string(kPauliConvention));
  for (int i = 0; i < 3; ++i) {
    kv.emplace_back("lambda.row" + std::to_string(i + 1), format_vec3(gen.lambda.row(i).transpose()));
  }
  kv.emplace_back("c", format_vec3(gen.c));
  kv.emplace_back("c_norm", format_real(gen.c.norm()));
  kv.emplace_back("unital", is_unital(gen) ? "true" : "false");

  const fs::path dir = ctx.out_dir("");
  write_key_values(dir / "lindblad.txt", kv);
  write_key_values(ctx.out(), kv);
  return kExitOk;
}

void add_config_options(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config, "Experiment configuration file")->required();
  sub->add_option("--out", opt.out, "Output directory");
  sub->add_option("--seed", opt.seed, "Noise seed (overrides noise.seed)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"GKSL parameter estimation and BKM information-geometry toolkit for one qubit"};
  app.require_subcommand(1);
  Options opt;

  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the model and write trajectory CSVs");
  add_config_options(simulate_cmd, opt);

  auto* estimate_cmd =
      app.add_subcommand("estimate", "Estimate (e, d[, c]) from a config or trajectory CSV files");
  estimate_cmd->add_option("--config", opt.config, "Experiment configuration file");
  estimate_cmd->add_option("files", opt.files, "Trajectory CSV files (t,a1,a2,a3[,v1,v2,v3])");
  estimate_cmd->add_option("--out", opt.out, "Output directory");
  estimate_cmd->add_option("--seed", opt.seed, "Noise seed (overrides noise.seed)");
  estimate_cmd->add_option("--threads", opt.threads, "Accumulation threads")
      ->check(CLI::Range(1u, 1024u));
  estimate_cmd->add_option("--mode", opt.mode, "standard | extended");
  estimate_cmd->add_option("--velocity", opt.velocity, "exact | finite-difference");
  estimate_cmd->add_flag("--allow-deficient", opt.allow_deficient,
                         "Accept a rank-deficient solve (exit 0 instead of 4)");

  auto* convergence_cmd =
      app.add_subcommand("convergence", "Estimates at growing data counts for clean and noisy data");
  add_config_options(convergence_cmd, opt);
  convergence_cmd->add_option("--mode", opt.mode, "standard | extended");
  convergence_cmd->add_flag("--allow-deficient", opt.allow_deficient,
                            "Accept a rank-deficient final checkpoint");

  auto* verify_cmd = app.add_subcommand("verify", "Check the speed identity along clean trajectories");
  add_config_options(verify_cmd, opt);

  auto* lindblad_cmd =
      app.add_subcommand("lindblad", "Convert a Lindblad specification to its Bloch generator");
  lindblad_cmd->add_option("--spec", opt.spec, "Lindblad specification file")->required();
  lindblad_cmd->add_option("--out", opt.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  Context ctx(opt, out, err);
  try {
    if (*simulate_cmd) return cmd_simulate(ctx);
    if (*estimate_cmd) return cmd_estimate(ctx);
    if (*convergence_cmd) return cmd_convergence(ctx);
    if (*verify_cmd) return cmd_verify(ctx);
    if (*lindblad_cmd) return cmd_lindblad(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BoundaryError& e) {
    err << "boundary error: " << e.what() << '\n';
    return kExitBoundary;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace igtomo

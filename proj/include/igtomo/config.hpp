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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "igtomo/estimator.hpp"
#include "igtomo/gksl_dynamics.hpp"
#include "igtomo/lindblad_generator.hpp"
#include "igtomo/trajectory_io.hpp"

// Experiment configuration: a flat "key = value" file with dotted section
// keys. Times are in units of T0. Vectors are whitespace or comma
// separated; several initial states are separated by ';'.
//
//   model.e = 1.0 -0.6 0.4            (required)
//   model.d = 0.2 0.3 0.1             (required)
//   model.c = 0 0 0
//   initial.states = 0.815 -0.007 0.466 ; 0.1 0.2 0.3   (required)
//   time.dt = 1e-3                    (required)
//   time.n_steps = 10000              (required)
//   noise.sigma = 0
//   noise.seed = 0
//   noise.boundary_policy = project | reject
//   mitigation.eps_excl = 1e-3
//   mitigation.weight_cap = off | <real >= 1>
//   estimator.mode = standard | extended
//   estimator.velocity = exact | finite-difference
//   convergence.checkpoints = pow2 | <list of counts>
//   verify.dt_fd = 1e-4
//   verify.fd_tolerance = 1e-3
//   verify.gksl_tolerance = 1e-10
//   output.dir = <path>
//   run.threads = 1

namespace igtomo {

struct ExperimentConfig {
  GkslModel model;
  std::vector<Vec3> initial_states;
  double dt = 0.0;
  std::size_t n_steps = 0;
  NoiseSpec noise;
  MitigationPolicy mitigation;
  EstimatorMode mode = EstimatorMode::kStandard;
  VelocitySource velocity = VelocitySource::kExact;
  std::vector<std::size_t> checkpoints;  // empty: powers of two
  double verify_dt_fd = 1e-4;
  double verify_fd_tolerance = 1e-3;
  double verify_gksl_tolerance = 1e-10;
  std::string output_dir;  // empty: not set in the file
  unsigned threads = 1;

  /// Every key that affects results, with its resolved value. output.dir and
  /// run.threads are left out so that copies written next to the results
  /// do not depend on where or how wide the run was.
  KeyValues resolved() const;
};

/// Throws ConfigError naming the offending key for unknown keys, missing
/// required keys or malformed values.
ExperimentConfig parse_config(const std::map<std::string, std::string>& kv);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Lindblad specification file:
///   hamiltonian.e = ex ey ez                       (H = e.sigma), or
///   hamiltonian.matrix = 8 reals (re im, row-major)
///   jump.<name>.op = sigma_minus | sigma_plus | sigma_x | sigma_y | sigma_z | 8 reals
///   jump.<name>.rate = gamma
LindbladSpec parse_lindblad_spec(const std::map<std::string, std::string>& kv);

}  // namespace igtomo

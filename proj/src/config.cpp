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

#include "igtomo/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <set>
#include <sstream>

namespace igtomo {

namespace {

const std::set<std::string> kRequiredKeys = {"model.e", "model.d", "initial.states", "time.dt",
                                             "time.n_steps"};

const std::set<std::string> kOptionalKeys = {
    "model.c",          "noise.sigma",          "noise.seed",
    "noise.boundary_policy", "mitigation.eps_excl", "mitigation.weight_cap",
    "estimator.mode",   "estimator.velocity",   "convergence.checkpoints",
    "verify.dt_fd",     "verify.fd_tolerance",  "verify.gksl_tolerance",
    "output.dir",       "run.threads"};

std::vector<std::string> tokens(const std::string& text) {
  std::string cleaned = text;
  for (char& ch : cleaned) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream ss(cleaned);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double to_real(const std::string& key, const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(x)) {
    throw ConfigError(key + ": '" + text + "' is not a finite real number");
  }
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
  char* end = nullptr;
  errno = 0;
  if (text.empty() || text[0] == '-') {
    throw ConfigError(key + ": '" + text + "' is not a non-negative integer");
  }
  const unsigned long long x = std::strtoull(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(key + ": '" + text + "' is not a non-negative integer");
  }
  return x;
}

Vec3 to_vec3(const std::string& key, const std::string& text) {
  const auto parts = tokens(text);
  if (parts.size() != 3) {
    throw ConfigError(key + ": expected three components, got " + std::to_string(parts.size()));
  }
  return {to_real(key, parts[0]), to_real(key, parts[1]), to_real(key, parts[2])};
}

Mat2c to_matrix(const std::string& key, const std::string& text) {
  const auto parts = tokens(text);
  if (parts.size() != 8) {
    throw ConfigError(key + ": expected 8 reals (re im for 4 entries, row-major)");
  }
  Mat2c m;
  for (int i = 0; i < 4; ++i) {
    m(i / 2, i % 2) = cplx(to_real(key, parts[2 * i]), to_real(key, parts[2 * i + 1]));
  }
  return m;
}

std::string join_vec(const Vec3& v) { return format_vec3(v); }

}  // namespace

KeyValues ExperimentConfig::resolved() const {
  KeyValues kv;
  kv.emplace_back("model.e", join_vec(model.e));
  kv.emplace_back("model.d", join_vec(model.d));
  kv.emplace_back("model.c", join_vec(model.c));
  std::string states;
  for (std::size_t i = 0; i < initial_states.size(); ++i) {
    if (i) states += " ; ";
    states += join_vec(initial_states[i]);
  }
  kv.emplace_back("initial.states", states);
  kv.emplace_back("time.dt", format_real(dt));
  kv.emplace_back("time.n_steps", std::to_string(n_steps));
  kv.emplace_back("noise.sigma", format_real(noise.sigma));
  kv.emplace_back("noise.seed", std::to_string(noise.seed));
  kv.emplace_back("noise.boundary_policy", to_string(noise.boundary_policy));
  kv.emplace_back("mitigation.eps_excl", format_real(mitigation.eps_excl));
  kv.emplace_back("mitigation.weight_cap",
                  mitigation.weight_cap ? format_real(*mitigation.weight_cap) : "off");
  kv.emplace_back("estimator.mode", to_string(mode));
  kv.emplace_back("estimator.velocity", to_string(velocity));
  std::string cps = "pow2";
  if (!checkpoints.empty()) {
    cps.clear();
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      if (i) cps += ' ';
      cps += std::to_string(checkpoints[i]);
    }
  }
  kv.emplace_back("convergence.checkpoints", cps);
  kv.emplace_back("verify.dt_fd", format_real(verify_dt_fd));
  kv.emplace_back("verify.fd_tolerance", format_real(verify_fd_tolerance));
  kv.emplace_back("verify.gksl_tolerance", format_real(verify_gksl_tolerance));
  return kv;
}

ExperimentConfig parse_config(const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (!kRequiredKeys.count(key) && !kOptionalKeys.count(key)) {
      throw ConfigError("unknown configuration key '" + key + "'");
    }
  }
  for (const auto& key : kRequiredKeys) {
    if (!kv.count(key)) throw ConfigError("missing required configuration key '" + key + "'");
  }
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  ExperimentConfig cfg;
  cfg.model.e = to_vec3("model.e", *get("model.e"));
  cfg.model.d = to_vec3("model.d", *get("model.d"));
  if (auto s = get("model.c")) cfg.model.c = to_vec3("model.c", *s);

  std::string states = *get("initial.states");
  std::istringstream ss(states);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (tokens(item).empty()) continue;
    const Vec3 a = to_vec3("initial.states", item);
    if (a.norm() > 1.0) {
      throw ConfigError("initial.states: state " + item + " lies outside the Bloch ball");
    }
    cfg.initial_states.push_back(a);
  }
  if (cfg.initial_states.empty()) throw ConfigError("initial.states: no states given");

  cfg.dt = to_real("time.dt", *get("time.dt"));
  if (!(cfg.dt > 0.0)) throw ConfigError("time.dt: must be positive");
  cfg.n_steps = to_uint("time.n_steps", *get("time.n_steps"));

  if (auto s = get("noise.sigma")) {
    cfg.noise.sigma = to_real("noise.sigma", *s);
    if (cfg.noise.sigma < 0.0) throw ConfigError("noise.sigma: must be non-negative");
  }
  if (auto s = get("noise.seed")) cfg.noise.seed = to_uint("noise.seed", *s);
  if (auto s = get("noise.boundary_policy")) cfg.noise.boundary_policy = parse_boundary_policy(*s);

  if (auto s = get("mitigation.eps_excl")) {
    cfg.mitigation.eps_excl = to_real("mitigation.eps_excl", *s);
    if (!(cfg.mitigation.eps_excl > 0.0 && cfg.mitigation.eps_excl < 1.0)) {
      throw ConfigError("mitigation.eps_excl: must lie in (0, 1)");
    }
  }
  if (auto s = get("mitigation.weight_cap"); s && *s != "off") {
    cfg.mitigation.weight_cap = to_real("mitigation.weight_cap", *s);
    if (!(*cfg.mitigation.weight_cap >= 1.0)) {
      throw ConfigError("mitigation.weight_cap: must be >= 1 or 'off'");
    }
  }
  if (auto s = get("estimator.mode")) cfg.mode = parse_estimator_mode(*s);
  if (auto s = get("estimator.velocity")) cfg.velocity = parse_velocity_source(*s);
  if (auto s = get("convergence.checkpoints"); s && *s != "pow2") {
    for (const auto& tok : tokens(*s)) {
      cfg.checkpoints.push_back(to_uint("convergence.checkpoints", tok));
    }
  }
  if (auto s = get("verify.dt_fd")) {
    cfg.verify_dt_fd = to_real("verify.dt_fd", *s);
    if (!(cfg.verify_dt_fd > 0.0)) throw ConfigError("verify.dt_fd: must be positive");
  }
  if (auto s = get("verify.fd_tolerance")) cfg.verify_fd_tolerance = to_real("verify.fd_tolerance", *s);
  if (auto s = get("verify.gksl_tolerance")) {
    cfg.verify_gksl_tolerance = to_real("verify.gksl_tolerance", *s);
  }
  if (auto s = get("output.dir")) cfg.output_dir = *s;
  if (auto s = get("run.threads")) {
    const auto n = to_uint("run.threads", *s);
    if (n == 0 || n > 1024) throw ConfigError("run.threads: must be in [1, 1024]");
    cfg.threads = static_cast<unsigned>(n);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_key_values(path));
}

LindbladSpec parse_lindblad_spec(const std::map<std::string, std::string>& kv) {
  LindbladSpec spec;
  std::map<std::string, JumpOperator> jumps;
  std::map<std::string, int> seen;  // bit 1: op, bit 2: rate
  bool have_h = false;
  for (const auto& [key, value] : kv) {
    if (key == "hamiltonian.e" || key == "hamiltonian.matrix") {
      if (have_h) throw ConfigError("give only one of hamiltonian.e and hamiltonian.matrix");
      have_h = true;
      spec.hamiltonian = key == "hamiltonian.e"
                             ? LindbladSpec::from_hamiltonian_vector(to_vec3(key, value)).hamiltonian
                             : to_matrix(key, value);
      continue;
    }
    if (key.rfind("jump.", 0) == 0) {
      const auto dot = key.rfind('.');
      const std::string name = key.substr(5, dot > 5 ? dot - 5 : 0);
      const std::string field = key.substr(dot + 1);
      if (name.empty()) throw ConfigError("malformed jump key '" + key + "'");
      if (field == "op") {
        Mat2c op;
        if (value == "sigma_minus") {
          op = sigma_minus();
        } else if (value == "sigma_plus") {
          op = sigma_plus();
        } else if (value == "sigma_x") {
          op = pauli(0);
        } else if (value == "sigma_y") {
          op = pauli(1);
        } else if (value == "sigma_z") {
          op = pauli(2);
        } else {
          op = to_matrix(key, value);
        }
        jumps[name].op = op;
        seen[name] |= 1;
      } else if (field == "rate") {
        jumps[name].rate = to_real(key, value);
        if (jumps[name].rate < 0.0) throw ConfigError(key + ": rate must be non-negative");
        seen[name] |= 2;
      } else {
        throw ConfigError("unknown jump field in '" + key + "'");
      }
      continue;
    }
    throw ConfigError("unknown Lindblad specification key '" + key + "'");
  }
  for (const auto& [name, bits] : seen) {
    if (bits != 3) throw ConfigError("jump." + name + " needs both op and rate");
    spec.jumps.push_back(jumps[name]);
  }
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

}  // namespace igtomo

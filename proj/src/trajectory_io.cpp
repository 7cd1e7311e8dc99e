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

#include "igtomo/trajectory_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace igtomo {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(trim(field));
  return out;
}

double parse_real(const std::string& text, std::size_t line_no) {
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ConfigError("line " + std::to_string(line_no) + ": '" + text + "' is not a number");
  }
  return x;
}

}  // namespace

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_vec3(const Vec3& v) {
  return format_real(v[0]) + " " + format_real(v[1]) + " " + format_real(v[2]);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const bool with_v = traj.v_exact.has_value();
  os << (with_v ? "t,a1,a2,a3,v1,v2,v3\n" : "t,a1,a2,a3\n");
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << format_real(traj.t[k]);
    for (int i = 0; i < 3; ++i) os << ',' << format_real(traj.a[k][i]);
    if (with_v) {
      for (int i = 0; i < 3; ++i) os << ',' << format_real((*traj.v_exact)[k][i]);
    }
    os << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw ConfigError("trajectory CSV is empty");
  }
  const auto header = split(trim(line), ',');
  const std::vector<std::string> base = {"t", "a1", "a2", "a3"};
  const std::vector<std::string> full = {"t", "a1", "a2", "a3", "v1", "v2", "v3"};
  bool with_v;
  if (header == base) {
    with_v = false;
  } else if (header == full) {
    with_v = true;
  } else {
    throw ConfigError("trajectory CSV header must be t,a1,a2,a3[,v1,v2,v3]");
  }

  Trajectory traj;
  std::vector<Vec3> v;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields");
    }
    traj.t.push_back(parse_real(fields[0], line_no));
    Vec3 a(parse_real(fields[1], line_no), parse_real(fields[2], line_no),
           parse_real(fields[3], line_no));
    if (a.norm() > 1.0 + 1e-12) {
      throw ConfigError("line " + std::to_string(line_no) + ": Bloch vector outside the unit ball");
    }
    traj.a.push_back(a);
    if (with_v) {
      v.emplace_back(parse_real(fields[4], line_no), parse_real(fields[5], line_no),
                     parse_real(fields[6], line_no));
    }
  }
  if (with_v) traj.v_exact = std::move(v);
  traj.meta.model = "imported";
  return traj;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_trajectory_csv(os, traj);
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read trajectory file " + path.string());
  return read_trajectory_csv(is);
}

KeyValues trajectory_metadata(const Trajectory& traj) {
  KeyValues kv;
  kv.emplace_back("model", traj.meta.model);
  kv.emplace_back("time_unit", "T0");
  kv.emplace_back("n_samples", std::to_string(traj.size()));
  kv.emplace_back("dt", traj.size() >= 2 ? format_real(traj.t[1] - traj.t[0]) : "0");
  kv.emplace_back("seed", std::to_string(traj.meta.seed));
  kv.emplace_back("sigma", format_real(traj.meta.sigma));
  kv.emplace_back("boundary_policy", to_string(traj.meta.boundary_policy));
  kv.emplace_back("n_projected", std::to_string(traj.meta.n_projected));
  kv.emplace_back("velocities", traj.v_exact ? "exact" : "none");
  return kv;
}

void write_key_values(std::ostream& os, const KeyValues& kv) {
  for (const auto& [key, value] : kv) os << key << " = " << value << '\n';
}

void write_key_values(const std::filesystem::path& path, const KeyValues& kv) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_key_values(os, kv);
}

std::map<std::string, std::string> read_key_values(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    if (!out.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + path.string());
  return read_key_values(is);
}

}  // namespace igtomo

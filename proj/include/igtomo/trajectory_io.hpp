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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "igtomo/gksl_dynamics.hpp"

// Text formats: trajectory CSV (t,a1,a2,a3[,v1,v2,v3]) and flat
// "key = value" sidecars. Reals are written with 17 significant digits so
// that a write/read cycle is lossless.

namespace igtomo {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string format_real(double x);
std::string format_vec3(const Vec3& v);  // "x y z"

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& is);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

KeyValues trajectory_metadata(const Trajectory& traj);

void write_key_values(std::ostream& os, const KeyValues& kv);
void write_key_values(const std::filesystem::path& path, const KeyValues& kv);

/// Parses "key = value" lines; '#' starts a comment. Duplicate keys and
/// lines without '=' raise ConfigError naming the line.
std::map<std::string, std::string> read_key_values(std::istream& is);
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

}  // namespace igtomo

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

#include <iosfwd>

namespace igtomo {

/// Process exit codes of the igtomo command.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,     // verify: tolerance violated; other runtime failures
  kExitConfig = 2,      // bad command line, config or input file
  kExitBoundary = 3,    // trajectory left the open Bloch ball
  kExitRank = 4,        // rank-deficient normal equations without --allow-deficient
};

/// Environment variable consulted for the output directory when neither
/// --out nor output.dir is given.
inline constexpr const char* kOutDirEnv = "IGTOMO_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "igtomo_out";

/// Entry point of the command-line tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace igtomo

// Copyright 2026 The realkit Authors
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

// Command-line front end. Every command emits one JSON report carrying
// command, status, version and a digest of the input files, followed by a
// command-specific payload. Reports are deterministic for fixed inputs,
// flags and seeds.

#ifndef REALKIT_CLI_HPP_
#define REALKIT_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace realkit::cli {

enum ExitCode : int {
  kExitOk = 0,             // feasible / pass
  kExitNegative = 1,       // infeasible / fail
  kExitInvalid = 2,        // malformed input or usage error
  kExitIndeterminate = 3,
};

/// Runs one command. `args` excludes the program name. The report goes to
/// the --out file when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace realkit::cli

#endif  // REALKIT_CLI_HPP_

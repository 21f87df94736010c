// Copyright 2026 The qkd2way Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QKD2WAY_TOOLS_CLI_HPP
#define QKD2WAY_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace qkd2way::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. `args` excludes the program name and starts with the
/// subcommand. Results go to `out` unless --out names a file; diagnostics and
/// usage errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Turns `key=value` lines into `--key=value` arguments. Blank lines and
/// lines starting with '#' are skipped. Throws std::runtime_error on a
/// malformed line.
std::vector<std::string> config_file_args(std::istream& in);

}  // namespace qkd2way::cli

#endif  // QKD2WAY_TOOLS_CLI_HPP

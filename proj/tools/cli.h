// Copyright 2026 The lutaug Authors.
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

#ifndef LUTAUG_TOOLS_CLI_H_
#define LUTAUG_TOOLS_CLI_H_

#include <string>
#include <vector>

namespace lutaug::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDegenerate = 3;

// Runs the command line `args` (args[0] is the program name). Progress and
// diagnostics go to stderr; results are written to files only.
int RunCli(const std::vector<std::string>& args);

}  // namespace lutaug::cli

#endif  // LUTAUG_TOOLS_CLI_H_

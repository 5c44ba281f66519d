// Copyright 2026 The Quadlab Authors
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


#ifndef QUADLAB_CLI_H_
#define QUADLAB_CLI_H_

#include <filesystem>
#include <ostream>
#include <string>

namespace quadlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitUsage = 2;

// Root for timestamped run directories when --output-dir is absent.
inline constexpr char kOutputRootEnv[] = "QUADLAB_OUTPUT_ROOT";

// Entry point of the quadlab tool: train, eval, sweep, schedule-trace,
// compare, plot. Bad flags print usage and return 2; failures while running
// print a one-line diagnostic and return 1.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

// $QUADLAB_OUTPUT_ROOT (default "runs") / <command>-<UTC timestamp>, with a
// numeric suffix if that directory already exists.
std::filesystem::path DefaultRunDirectory(const std::string& command);

}  // namespace quadlab

#endif  // QUADLAB_CLI_H_

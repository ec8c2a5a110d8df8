// Copyright 2026 The Boardpush Authors
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

// Subcommands of the boardpush binary. Each returns a process exit code and
// writes human-readable output to the given streams.

#ifndef BOARDPUSH_CLI_COMMANDS_H_
#define BOARDPUSH_CLI_COMMANDS_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace boardpush::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidInput = 2;  // bad config, missing or malformed file
inline constexpr int kExitAborted = 3;       // training diverged
inline constexpr int kExitMismatch = 4;      // checkpoint architecture mismatch

// Validates a model parameter file and prints the resulting trees. An empty
// path checks the built-in defaults.
int CmdModelCheck(const std::string& path, std::ostream& out, std::ostream& err);

struct TrainArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string run_dir;  // overrides run_dir of the config when set
  std::string resume;   // checkpoint to continue from
};
int CmdTrain(const TrainArgs& args, std::ostream& out, std::ostream& err);

struct EvalArgs {
  std::string checkpoint;
  int episodes = 10;
  std::string command = "0.4";  // forward deck velocity, m/s, as typed
  // Optional config; defaults to the one embedded in the checkpoint.
  std::string config;
  std::vector<std::string> overrides;
  std::string out_dir;     // defaults to <checkpoint dir>/eval
  int record_episodes = 10;  // episodes written to the trajectory files
  uint64_t seed = 0;
};
int CmdEval(const EvalArgs& args, std::ostream& out, std::ostream& err);

struct ReplayArgs {
  std::string trajectory;
  std::string out_dir;  // defaults to the trajectory's directory
};
int CmdReplay(const ReplayArgs& args, std::ostream& out, std::ostream& err);

}  // namespace boardpush::cli

#endif  // BOARDPUSH_CLI_COMMANDS_H_

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

// Run configuration: model, environment, reward, gait and training settings
// in one JSON document.

#ifndef BOARDPUSH_CLI_CONFIG_H_
#define BOARDPUSH_CLI_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "boardpush/env/deck_toy_env.h"
#include "boardpush/env/skate_env.h"
#include "boardpush/learn/train.h"
#include "json.hpp"

namespace boardpush::cli {

struct RunConfig {
  std::string task = "skate";  // "skate" or "toy"
  uint64_t seed = 1;
  std::string run_dir = "runs/default";
  env::TaskSpec spec;
  env::ToyConfig toy;
  learn::TrainConfig train;  // train.seed mirrors seed
  int workers = 0;           // 0: one per hardware thread
};

nlohmann::json ToJson(const RunConfig& cfg);
// Starts from defaults; unknown keys and type errors come back as one
// kInvalidArgument naming every offending dotted path.
absl::StatusOr<RunConfig> RunConfigFromJson(const nlohmann::json& object);
absl::Status ValidateRunConfig(const RunConfig& cfg);

absl::StatusOr<nlohmann::json> ReadJsonFile(const std::string& path);

// Applies "dotted.key=value"; the value is parsed as JSON when it is valid
// JSON and taken as a string otherwise.
absl::Status ApplyOverride(const std::string& assignment, nlohmann::json* object);

// Config file plus overrides, parsed and validated.
absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path,
                                        const std::vector<std::string>& overrides);

// Worker threads for a request, capped by BOARDPUSH_THREADS when set.
int ResolveWorkers(int requested);

// Environment factory for the configured task.
learn::EnvFactory MakeEnvFactory(const RunConfig& cfg);

}  // namespace boardpush::cli

#endif  // BOARDPUSH_CLI_CONFIG_H_

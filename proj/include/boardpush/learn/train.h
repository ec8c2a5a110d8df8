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

// Rollout/update cycles with metrics and checkpoints.

#ifndef BOARDPUSH_LEARN_TRAIN_H_
#define BOARDPUSH_LEARN_TRAIN_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "boardpush/env/environment.h"
#include "boardpush/learn/ppo.h"
#include "json.hpp"

namespace boardpush::learn {

struct TrainConfig {
  int n_envs = 1024;
  int64_t total_steps = 10'000'000;  // environment (control) steps
  int horizon = 64;
  PpoConfig ppo;
  double lr = 3e-4;
  bool lr_decay = true;  // linear to zero over the run
  uint64_t seed = 1;
  std::vector<int> hidden = {256, 256};
  double init_log_std = -1.0;
  int checkpoint_every = 50;  // updates
  int workers = 1;
};

absl::Status ValidateTrainConfig(const TrainConfig& cfg);

int64_t NumUpdates(const TrainConfig& cfg);

using EnvFactory = std::function<absl::StatusOr<std::unique_ptr<env::Environment>>()>;

struct TrainOptions {
  std::string run_dir;
  // Continue from this checkpoint; metrics past its update are dropped.
  std::string resume_from;
  // Embedded in every checkpoint.
  nlohmann::json config = nlohmann::json::object();
  // Stops after this many updates in this call (< 0: run to completion).
  int64_t max_updates = -1;
};

struct TrainResult {
  int64_t updates = 0;
  int64_t env_steps = 0;
  std::string last_checkpoint;
};

// Writes <run_dir>/metrics.jsonl (one object per update, reproducible from
// the seed), <run_dir>/throughput.jsonl (wall-clock rates) and
// <run_dir>/checkpoints/. A non-finite loss returns kAborted and keeps the
// last good checkpoint.
absl::StatusOr<TrainResult> Train(const TrainConfig& cfg, const EnvFactory& factory,
                                  const TrainOptions& options);

}  // namespace boardpush::learn

#endif  // BOARDPUSH_LEARN_TRAIN_H_

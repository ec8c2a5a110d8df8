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

// Versioned binary checkpoint: "BPCK", u32 schema, u32 header length, a
// JSON header naming each array's shape and byte offset, then the arrays as
// little-endian f32.

#ifndef BOARDPUSH_LEARN_CHECKPOINT_H_
#define BOARDPUSH_LEARN_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "boardpush/learn/policy.h"
#include "boardpush/learn/ppo.h"
#include "json.hpp"

namespace boardpush::learn {

inline constexpr uint32_t kCheckpointSchema = 1;

struct Checkpoint {
  PolicyShape shape;
  std::vector<double> params;
  Eigen::VectorXd obs_mean;
  Eigen::VectorXd obs_var;
  double obs_count = 0.0;
  AdamState adam;
  int64_t update = 0;
  int64_t env_steps = 0;
  nlohmann::json config;  // resolved run configuration
};

Checkpoint MakeCheckpoint(const ActorCritic& policy, const AdamState& adam, int64_t update,
                          int64_t env_steps, const nlohmann::json& config);

// Writes through a temporary file and a rename, so an interrupted write
// leaves any previous file intact.
absl::Status SaveCheckpoint(const std::string& path, const Checkpoint& ckpt);
absl::StatusOr<Checkpoint> LoadCheckpoint(const std::string& path);

// Copies weights and statistics into a policy of the same architecture;
// kFailedPrecondition names the mismatch otherwise.
absl::Status RestorePolicy(const Checkpoint& ckpt, ActorCritic* policy);

}  // namespace boardpush::learn

#endif  // BOARDPUSH_LEARN_CHECKPOINT_H_

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

// Trajectory frames (JSONL) and their flat CSV form.

#ifndef BOARDPUSH_CLI_TRAJECTORY_H_
#define BOARDPUSH_CLI_TRAJECTORY_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace boardpush::cli {

// t, q0..q18, v0..v17, deck_q0..deck_q8, deck_v0..deck_v7, action0..action11,
// the reward terms in reward order, reward_total, episode, termination.
const std::vector<std::string>& CsvColumns();

// Checks that a frame carries every field the CSV and plots need.
absl::Status ValidateFrame(const nlohmann::json& frame);
absl::StatusOr<std::string> CsvRow(const nlohmann::json& frame);

// Frames of a JSONL file; errors name the offending line.
absl::StatusOr<std::vector<nlohmann::json>> ReadTrajectory(const std::string& path);

}  // namespace boardpush::cli

#endif  // BOARDPUSH_CLI_TRAJECTORY_H_

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

// Interface the rollout engine drives; implemented by the skateboarding task
// and by a deck-only toy task.

#ifndef BOARDPUSH_ENV_ENVIRONMENT_H_
#define BOARDPUSH_ENV_ENVIRONMENT_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace boardpush::env {

enum class Termination { kNone, kFell, kTilted, kBoardLost, kDiverged, kTimeout };

std::string_view TerminationName(Termination reason);

// Bounds and resting value of each action dimension.
struct ActionSpace {
  std::vector<double> low;
  std::vector<double> high;
  std::vector<double> nominal;
};

struct StepOutcome {
  double reward = 0.0;
  bool done = false;
  Termination reason = Termination::kNone;
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual int obs_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual const ActionSpace& action_space() const = 0;

  // Reseeds the instance stream and starts an episode.
  virtual void Reset(uint64_t seed, std::span<double> obs) = 0;
  // Starts the next episode from the instance's own stream.
  virtual void ResetNext(std::span<double> obs) = 0;
  virtual StepOutcome Step(std::span<const double> action, std::span<double> obs) = 0;
  // Diagnostics of the last step: command tracking error (m/s) and the
  // unweighted reward terms.
  virtual double TrackingError() const = 0;
  virtual std::span<const std::string_view> TermNames() const = 0;
  virtual std::span<const double> LastTerms() const = 0;
};

}  // namespace boardpush::env

#endif  // BOARDPUSH_ENV_ENVIRONMENT_H_

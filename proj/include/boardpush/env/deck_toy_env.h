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

// Deck-only velocity matching: one actuated force pushes the board along
// world x toward a commanded speed.

#ifndef BOARDPUSH_ENV_DECK_TOY_ENV_H_
#define BOARDPUSH_ENV_DECK_TOY_ENV_H_

#include <array>
#include <memory>
#include <random>
#include <span>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "boardpush/dynamics/sim.h"
#include "boardpush/env/environment.h"
#include "boardpush/model/model.h"
#include "boardpush/rewards/rewards.h"

namespace boardpush::env {

struct ToyConfig {
  double force_scale = 20.0;  // N per unit action
  int episode_steps = 100;
  int decimation = 10;
  double dt = 0.002;
  double sigma = 0.25;
  double command_min = 0.0;
  double command_max = 1.0;
};

absl::Status ValidateToyConfig(const ToyConfig& cfg);

class DeckToyEnv : public Environment {
 public:
  static constexpr int kObsDim = 5;  // v_x, v_y, yaw rate, command, command - v_x

  static absl::StatusOr<std::unique_ptr<DeckToyEnv>> Create(const model::ModelParams& params,
                                                            const ToyConfig& cfg = {});

  int obs_dim() const override { return kObsDim; }
  int action_dim() const override { return 1; }
  const ActionSpace& action_space() const override { return action_space_; }
  void Reset(uint64_t seed, std::span<double> obs) override;
  void ResetNext(std::span<double> obs) override;
  StepOutcome Step(std::span<const double> action, std::span<double> obs) override;
  double TrackingError() const override;
  std::span<const std::string_view> TermNames() const override { return kNames; }
  std::span<const double> LastTerms() const override { return terms_; }

  const dynamics::SimState& state() const { return state_; }
  double command() const { return command_; }

 private:
  static constexpr std::array<std::string_view, 1> kNames = {"deck_lin_track"};

  DeckToyEnv(std::shared_ptr<const dynamics::World> world, const ToyConfig& cfg);
  void StartEpisode(std::span<double> obs);
  void Observe(std::span<double> obs) const;

  std::shared_ptr<const dynamics::World> world_;
  ToyConfig cfg_;
  ActionSpace action_space_;
  std::mt19937_64 rng_;
  dynamics::SimState state_;
  double command_ = 0.0;
  std::array<double, 1> terms_ = {0.0};
  int steps_ = 0;
};

}  // namespace boardpush::env

#endif  // BOARDPUSH_ENV_DECK_TOY_ENV_H_

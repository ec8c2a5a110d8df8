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

#include "boardpush/env/deck_toy_env.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "boardpush/env/skate_env.h"

namespace boardpush::env {

absl::Status ValidateToyConfig(const ToyConfig& cfg) {
  if (!(cfg.force_scale > 0.0)) return absl::InvalidArgumentError("toy.force_scale must be > 0");
  if (cfg.episode_steps < 1) return absl::InvalidArgumentError("toy.episode_steps must be >= 1");
  if (cfg.decimation < 1) return absl::InvalidArgumentError("toy.decimation must be >= 1");
  if (!(cfg.dt > 0.0 && cfg.dt <= 0.01)) {
    return absl::InvalidArgumentError(absl::StrCat("toy.dt must lie in (0, 0.01] (got ", cfg.dt, ")"));
  }
  if (!(cfg.sigma > 0.0)) return absl::InvalidArgumentError("toy.sigma must be > 0");
  if (!(cfg.command_min <= cfg.command_max)) {
    return absl::InvalidArgumentError("toy command range is empty");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::unique_ptr<DeckToyEnv>> DeckToyEnv::Create(const model::ModelParams& params,
                                                               const ToyConfig& cfg) {
  if (absl::Status s = ValidateToyConfig(cfg); !s.ok()) return s;
  dynamics::WorldOptions options;
  options.with_robot = false;
  absl::StatusOr<dynamics::World> world = dynamics::World::Create(params, options);
  if (!world.ok()) return world.status();
  return std::unique_ptr<DeckToyEnv>(
      new DeckToyEnv(std::make_shared<const dynamics::World>(*std::move(world)), cfg));
}

DeckToyEnv::DeckToyEnv(std::shared_ptr<const dynamics::World> world, const ToyConfig& cfg)
    : world_(std::move(world)), cfg_(cfg) {
  action_space_ = {.low = {-1.0}, .high = {1.0}, .nominal = {0.0}};
  state_ = world_->DefaultState();
}

void DeckToyEnv::Reset(uint64_t seed, std::span<double> obs) {
  rng_ = MakeRng(seed);
  StartEpisode(obs);
}

void DeckToyEnv::ResetNext(std::span<double> obs) { StartEpisode(obs); }

void DeckToyEnv::StartEpisode(std::span<double> obs) {
  command_ = std::uniform_real_distribution<double>(cfg_.command_min, cfg_.command_max)(rng_);
  state_ = world_->DefaultState();
  state_.contacts = dynamics::DetectContacts(*world_, state_);
  terms_[0] = 0.0;
  steps_ = 0;
  Observe(obs);
}

StepOutcome DeckToyEnv::Step(std::span<const double> action, std::span<double> obs) {
  const double a = std::isfinite(action[0]) ? std::clamp(action[0], -1.0, 1.0) : 0.0;
  dynamics::StepInput input;
  input.deck_force = spatial::Vec3(cfg_.force_scale * a, 0.0, 0.0);
  StepOutcome out;
  for (int k = 0; k < cfg_.decimation; ++k) {
    if (!dynamics::Step(*world_, input, cfg_.dt, &state_).ok()) {
      out.reason = Termination::kDiverged;
      break;
    }
  }
  ++steps_;
  rewards::BodySignals sig;
  sig.v_deck_xy = state_.v_board.head<2>();
  terms_[0] = rewards::DeckLinearTracking({.v_x = command_}, sig, cfg_.sigma);
  out.reward = terms_[0];
  if (out.reason == Termination::kNone && steps_ >= cfg_.episode_steps) {
    out.reason = Termination::kTimeout;
  }
  out.done = out.reason != Termination::kNone;
  Observe(obs);
  return out;
}

double DeckToyEnv::TrackingError() const {
  return (Eigen::Vector2d(command_, 0.0) - state_.v_board.head<2>()).norm();
}

void DeckToyEnv::Observe(std::span<double> obs) const {
  obs[0] = state_.v_board[0];
  obs[1] = state_.v_board[1];
  obs[2] = state_.v_board[5];
  obs[3] = command_;
  obs[4] = command_ - state_.v_board[0];
}

}  // namespace boardpush::env

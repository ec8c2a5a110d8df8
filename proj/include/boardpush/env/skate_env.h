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

// The skateboarding task: a PD-driven humanoid with its right foot on the
// deck, pushing with the left foot on a fixed gait cycle.

#ifndef BOARDPUSH_ENV_SKATE_ENV_H_
#define BOARDPUSH_ENV_SKATE_ENV_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string_view>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "boardpush/dynamics/sim.h"
#include "boardpush/env/environment.h"
#include "boardpush/gait/gait.h"
#include "boardpush/model/model.h"
#include "boardpush/rewards/rewards.h"
#include "json.hpp"

namespace boardpush::env {

inline constexpr int kObsDim = 47;
inline constexpr int kActionDim = model::kActuatedJoints;

// Observation layout: offsets of each block.
inline constexpr int kObsJointPos = 0;
inline constexpr int kObsJointVel = 12;
inline constexpr int kObsGravity = 24;
inline constexpr int kObsBaseAngVel = 27;
inline constexpr int kObsBaseLinVel = 30;
inline constexpr int kObsCommand = 33;
inline constexpr int kObsClock = 36;
inline constexpr int kObsDeckPos = 38;
inline constexpr int kObsDeckLinVel = 41;
inline constexpr int kObsDeckAngVel = 44;

struct EnvConfig {
  int max_steps = 1000;
  int decimation = 10;
  double dt = 0.002;
  double min_pelvis_height = 0.6;
  double max_pelvis_tilt = 0.8;
  double max_foot_deck_distance = 0.3;
  double joint_noise = 0.03;  // rad, uniform half-width
  double base_noise = 0.01;   // m, uniform half-width
  double left_knee_bend = 0.5;  // nominal left knee flexion, rad
  // Per-leg gains in model::kLegJointNames order; damping defaults to
  // 2 * sqrt(kp * I) with I = 0.3 (hip), 0.15 (knee), 0.02 (ankle) kg*m^2.
  std::array<double, model::kLegJoints> kp = {100.0, 100.0, 100.0, 100.0, 40.0, 40.0};
  std::array<double, model::kLegJoints> kd = {
      10.954451150103322, 10.954451150103322, 10.954451150103322,
      7.745966692414834,  1.7888543819998317, 1.7888543819998317};
  double command_min = 0.0;
  double command_max = 1.0;
  // Overrides command sampling when set (evaluation).
  std::optional<double> fixed_command;
  dynamics::ContactMaterial contact;
  double gravity = 9.81;
};

absl::Status ValidateEnvConfig(const EnvConfig& cfg);

// Everything one environment instance needs besides its own state. Shared
// read-only between instances.
struct TaskSpec {
  model::ModelParams model;
  EnvConfig env;
  rewards::RewardConfig reward;
  gait::GaitSchedule gait;
};

absl::Status ValidateTask(const TaskSpec& task);

// Nominal standing configuration: left sole flat on the ground, right sole
// flat on the deck top, deck resting on its wheels.
struct NominalPose {
  std::array<double, kActionDim> joints = {};
  Eigen::Vector3d pelvis = Eigen::Vector3d::Zero();
  Eigen::Vector3d deck = Eigen::Vector3d::Zero();
};
NominalPose ComputeNominalPose(const model::ModelParams& params, const EnvConfig& cfg);

// Signals the rewards read, from positions, velocities and contact forces.
rewards::BodySignals ExtractSignals(const dynamics::World& world,
                                    const dynamics::SimState& state);

// PD torques clamped to the per-joint limits.
void PdTorques(const dynamics::World& world, const EnvConfig& cfg,
               std::span<const double> targets, const dynamics::SimState& state,
               std::span<double> torques);

std::optional<Termination> CheckTermination(const dynamics::World& world,
                                            const dynamics::SimState& state,
                                            const EnvConfig& cfg);

rewards::Command SampleCommand(const EnvConfig& cfg, std::mt19937_64& rng);

class SkateEnv : public Environment {
 public:
  static absl::StatusOr<std::unique_ptr<SkateEnv>> Create(std::shared_ptr<const TaskSpec> task);

  int obs_dim() const override { return kObsDim; }
  int action_dim() const override { return kActionDim; }
  const ActionSpace& action_space() const override { return action_space_; }
  void Reset(uint64_t seed, std::span<double> obs) override;
  void ResetNext(std::span<double> obs) override;
  StepOutcome Step(std::span<const double> action, std::span<double> obs) override;
  double TrackingError() const override;
  std::span<const std::string_view> TermNames() const override { return rewards::kTermNames; }
  std::span<const double> LastTerms() const override { return breakdown_.terms; }

  // Builds the observation of the current state.
  void Observe(std::span<double> obs) const;

  const dynamics::World& world() const { return *world_; }
  const TaskSpec& task() const { return *task_; }
  const dynamics::SimState& state() const { return state_; }
  const gait::GaitClock& clock() const { return clock_; }
  const rewards::Command& command() const { return command_; }
  const rewards::RewardBreakdown& breakdown() const { return breakdown_; }
  const std::array<double, kActionDim>& last_action() const { return action_; }
  const std::array<double, kActionDim>& previous_action() const { return action_prev_; }
  const std::array<double, kActionDim>& last_torque() const { return torque_; }
  const NominalPose& nominal() const { return nominal_; }
  int steps() const { return steps_; }

  // Replaces the state (tests, replays). The clock and command are kept.
  void SetState(const dynamics::SimState& state) { state_ = state; }

 private:
  SkateEnv(std::shared_ptr<const TaskSpec> task, std::shared_ptr<const dynamics::World> world);
  void StartEpisode(std::span<double> obs);

  std::shared_ptr<const TaskSpec> task_;
  std::shared_ptr<const dynamics::World> world_;
  NominalPose nominal_;
  ActionSpace action_space_;
  std::mt19937_64 rng_;
  dynamics::SimState state_;
  gait::GaitClock clock_;
  rewards::Command command_;
  rewards::RewardBreakdown breakdown_;
  std::array<double, kActionDim> action_ = {};
  std::array<double, kActionDim> action_prev_ = {};
  std::array<double, kActionDim> torque_ = {};
  int steps_ = 0;
};

// Seeds a generator from a 64-bit seed through std::seed_seq.
std::mt19937_64 MakeRng(uint64_t seed, uint64_t stream = 0);

// One trajectory frame: the state snapshot plus action, torque, command,
// phase, per-foot load and contact (load above f_min), reward breakdown and
// termination.
nlohmann::json FrameJson(const SkateEnv& env, Termination reason);

}  // namespace boardpush::env

#endif  // BOARDPUSH_ENV_SKATE_ENV_H_

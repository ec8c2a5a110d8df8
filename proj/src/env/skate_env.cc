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

#include "boardpush/env/skate_env.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "boardpush/dynamics/multibody.h"

namespace boardpush::env {
namespace {

using dynamics::ContactPair;
using Eigen::Matrix3d;
using Eigen::Vector3d;

Matrix3d RootRotation(const Eigen::VectorXd& q) {
  return Eigen::Quaterniond(q[3], q[4], q[5], q[6]).normalized().toRotationMatrix();
}

std::array<model::JointLimits, kActionDim> ActuatedLimits(const model::RobotParams& r) {
  std::array<model::JointLimits, kActionDim> out;
  for (int j = 0; j < model::kLegJoints; ++j) {
    out[j] = r.leg_limits[j];
    out[j + model::kLegJoints] = model::RightLegLimits(r, j);
  }
  return out;
}

std::vector<double> ToStd(std::span<const double> v) { return {v.begin(), v.end()}; }

}  // namespace

std::string_view TerminationName(Termination reason) {
  switch (reason) {
    case Termination::kNone:
      return "none";
    case Termination::kFell:
      return "fell";
    case Termination::kTilted:
      return "tilted";
    case Termination::kBoardLost:
      return "board_lost";
    case Termination::kDiverged:
      return "diverged";
    case Termination::kTimeout:
      return "timeout";
  }
  return "unknown";
}

absl::Status ValidateEnvConfig(const EnvConfig& cfg) {
  auto positive = [](const char* field, double value) -> absl::Status {
    if (value > 0.0 && std::isfinite(value)) return absl::OkStatus();
    return absl::InvalidArgumentError(absl::StrCat(field, " must be > 0 (got ", value, ")"));
  };
  if (cfg.max_steps < 1) return absl::InvalidArgumentError("env.max_steps must be >= 1");
  if (cfg.decimation < 1) return absl::InvalidArgumentError("env.decimation must be >= 1");
  if (!(cfg.dt > 0.0 && cfg.dt <= 0.01)) {
    return absl::InvalidArgumentError(absl::StrCat("env.dt must lie in (0, 0.01] (got ", cfg.dt, ")"));
  }
  for (const auto& [field, value] :
       {std::pair{"env.min_pelvis_height", cfg.min_pelvis_height},
        std::pair{"env.max_pelvis_tilt", cfg.max_pelvis_tilt},
        std::pair{"env.max_foot_deck_distance", cfg.max_foot_deck_distance},
        std::pair{"env.left_knee_bend", cfg.left_knee_bend}}) {
    if (absl::Status s = positive(field, value); !s.ok()) return s;
  }
  if (!(cfg.joint_noise >= 0.0) || !(cfg.base_noise >= 0.0)) {
    return absl::InvalidArgumentError("env reset noise scales must be >= 0");
  }
  for (int j = 0; j < model::kLegJoints; ++j) {
    const std::string name(model::kLegJointNames[j]);
    if (absl::Status s = positive(("env.kp." + name).c_str(), cfg.kp[j]); !s.ok()) return s;
    if (absl::Status s = positive(("env.kd." + name).c_str(), cfg.kd[j]); !s.ok()) return s;
  }
  if (!(cfg.command_min >= 0.0 && cfg.command_min <= cfg.command_max && cfg.command_max <= 1.0)) {
    return absl::InvalidArgumentError("env command range must satisfy 0 <= min <= max <= 1");
  }
  if (cfg.fixed_command && !(*cfg.fixed_command >= 0.0 && *cfg.fixed_command <= 1.0)) {
    return absl::InvalidArgumentError("env.fixed_command must lie in [0, 1]");
  }
  if (absl::Status s = dynamics::ValidateMaterial(cfg.contact); !s.ok()) {
    return absl::InvalidArgumentError(absl::StrCat("env.contact.", s.message()));
  }
  return positive("env.gravity", cfg.gravity);
}

absl::Status ValidateTask(const TaskSpec& task) {
  if (absl::Status s = model::ValidateParams(task.model); !s.ok()) return s;
  if (absl::Status s = ValidateEnvConfig(task.env); !s.ok()) return s;
  if (absl::Status s = rewards::ValidateConfig(task.reward); !s.ok()) return s;
  return gait::ValidateSchedule(task.gait);
}

NominalPose ComputeNominalPose(const model::ModelParams& params, const EnvConfig& cfg) {
  const model::RobotParams& r = params.robot;
  const model::SkateboardParams& s = params.skateboard;
  const double lt = r.thigh_length;
  const double ls = r.shank_length;
  NominalPose pose;
  pose.deck = Vector3d(r.foot_forward, -0.5 * r.hip_width,
                       s.truck_height + s.axle_drop + s.wheel_radius);
  const double deck_top = pose.deck.z() + 0.5 * s.deck_thickness;

  // Hip-to-ankle distance for a knee bend, and the bend for a distance.
  auto reach = [&](double knee) { return std::sqrt(lt * lt + ls * ls + 2 * lt * ls * std::cos(knee)); };
  auto bend = [&](double d) {
    const double c = (d * d - lt * lt - ls * ls) / (2 * lt * ls);
    return std::acos(std::clamp(c, -1.0, 1.0));
  };
  const double knee_left = cfg.left_knee_bend;
  const double d_left = reach(knee_left);
  const double knee_right = bend(d_left - deck_top);
  auto fill = [&](int offset, double knee) {
    const double hip = -std::atan2(ls * std::sin(knee), lt + ls * std::cos(knee));
    pose.joints[offset + 2] = hip;
    pose.joints[offset + 3] = knee;
    pose.joints[offset + 4] = -(hip + knee);
  };
  fill(0, knee_left);
  fill(model::kLegJoints, knee_right);
  pose.pelvis = Vector3d(0.0, 0.0, d_left + r.ankle_height + r.hip_drop);
  return pose;
}

rewards::BodySignals ExtractSignals(const dynamics::World& world, const dynamics::SimState& state) {
  dynamics::Kinematics kr;
  dynamics::Kinematics kb;
  dynamics::ComputeKinematics(world.robot(), state.q_robot, state.v_robot, &kr);
  dynamics::ComputeKinematics(world.board(), state.q_board, state.v_board, &kb);
  rewards::BodySignals sig;
  const Vector3d w_deck = dynamics::AngularVelocityWorld(kb, world.deck());
  sig.v_deck_xy = state.v_board.head<2>();
  sig.w_deck_z = w_deck.z();
  sig.w_deck_xy = w_deck.head<2>();
  for (int side = 0; side < 2; ++side) {
    const int foot = world.foot(side);
    const Vector3d v = dynamics::PointVelocityWorld(kr, foot, dynamics::ComWorld(world.robot(), kr, foot));
    sig.foot_speed[side] = v.norm();
    if (side == 1) {
      sig.v_right = v;
      sig.v_right_xy = v.head<2>();
      sig.w_right_xy = dynamics::AngularVelocityWorld(kr, foot).head<2>();
    }
  }
  const dynamics::MomentumSummary m = dynamics::Momentum(world.robot(), kr);
  sig.v_com_xy = (m.linear / m.mass).head<2>();
  sig.w_base_z = dynamics::AngularVelocityWorld(kr, world.pelvis()).z();
  for (const dynamics::ActiveContact& c : state.contacts) {
    if (c.pair == ContactPair::kWheelGround) continue;
    sig.foot_force[c.index] += c.normal_force;
    if (c.pair == ContactPair::kFootDeck && c.normal_force > 0.0) sig.right_on_deck = true;
  }
  return sig;
}

void PdTorques(const dynamics::World& world, const EnvConfig& cfg, std::span<const double> targets,
               const dynamics::SimState& state, std::span<double> torques) {
  const model::RobotParams& r = world.params().robot;
  const std::vector<int>& dofs = world.robot().actuated_dofs();
  for (int i = 0; i < kActionDim; ++i) {
    const int j = i % model::kLegJoints;
    const int v = dofs[i];
    const double tau = cfg.kp[j] * (targets[i] - state.q_robot[v + 1]) - cfg.kd[j] * state.v_robot[v];
    torques[i] = std::clamp(tau, -r.torque_limits[j], r.torque_limits[j]);
  }
}

std::optional<Termination> CheckTermination(const dynamics::World& world,
                                            const dynamics::SimState& state, const EnvConfig& cfg) {
  if (state.q_robot[2] < cfg.min_pelvis_height) return Termination::kFell;
  const double up = std::clamp(RootRotation(state.q_robot)(2, 2), -1.0, 1.0);
  if (std::acos(up) > cfg.max_pelvis_tilt) return Termination::kTilted;
  dynamics::Kinematics kr;
  dynamics::ComputeKinematics(world.robot(), state.q_robot, Eigen::VectorXd(), &kr);
  const Vector3d foot = dynamics::ComWorld(world.robot(), kr, world.foot(1));
  if ((foot.head<2>() - state.q_board.head<2>()).norm() > cfg.max_foot_deck_distance) {
    return Termination::kBoardLost;
  }
  return std::nullopt;
}

rewards::Command SampleCommand(const EnvConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(cfg.command_min, cfg.command_max);
  return {.v_x = u(rng), .v_y = 0.0, .yaw_rate = 0.0};
}

std::mt19937_64 MakeRng(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

absl::StatusOr<std::unique_ptr<SkateEnv>> SkateEnv::Create(std::shared_ptr<const TaskSpec> task) {
  if (absl::Status s = ValidateTask(*task); !s.ok()) return s;
  dynamics::WorldOptions options;
  options.material = task->env.contact;
  options.gravity = Vector3d(0.0, 0.0, -task->env.gravity);
  absl::StatusOr<dynamics::World> world = dynamics::World::Create(task->model, options);
  if (!world.ok()) return world.status();
  auto shared = std::make_shared<const dynamics::World>(*std::move(world));
  return std::unique_ptr<SkateEnv>(new SkateEnv(std::move(task), std::move(shared)));
}

SkateEnv::SkateEnv(std::shared_ptr<const TaskSpec> task,
                   std::shared_ptr<const dynamics::World> world)
    : task_(std::move(task)),
      world_(std::move(world)),
      nominal_(ComputeNominalPose(task_->model, task_->env)),
      clock_(task_->gait) {
  const auto limits = ActuatedLimits(task_->model.robot);
  for (int i = 0; i < kActionDim; ++i) {
    action_space_.low.push_back(limits[i].lo);
    action_space_.high.push_back(limits[i].hi);
    action_space_.nominal.push_back(nominal_.joints[i]);
  }
  state_ = world_->DefaultState();
}

void SkateEnv::Reset(uint64_t seed, std::span<double> obs) {
  rng_ = MakeRng(seed);
  StartEpisode(obs);
}

void SkateEnv::ResetNext(std::span<double> obs) { StartEpisode(obs); }

void SkateEnv::StartEpisode(std::span<double> obs) {
  const EnvConfig& cfg = task_->env;
  command_ = cfg.fixed_command ? rewards::Command{.v_x = *cfg.fixed_command}
                               : SampleCommand(cfg, rng_);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const dynamics::Multibody& robot = world_->robot();
  state_ = world_->DefaultState();
  for (int i = 0; i < 3; ++i) state_.q_robot[i] = nominal_.pelvis[i] + cfg.base_noise * unit(rng_);
  for (int i = 0; i < kActionDim; ++i) {
    const double q = nominal_.joints[i] + cfg.joint_noise * unit(rng_);
    state_.q_robot[robot.actuated_dofs()[i] + 1] =
        std::clamp(q, action_space_.low[i], action_space_.high[i]);
  }
  state_.q_board.head<3>() = nominal_.deck;
  state_.contacts = dynamics::DetectContacts(*world_, state_);
  clock_ = gait::GaitClock(task_->gait);
  std::copy(nominal_.joints.begin(), nominal_.joints.end(), action_.begin());
  action_prev_ = action_;
  torque_.fill(0.0);
  breakdown_ = rewards::RewardBreakdown();
  steps_ = 0;
  Observe(obs);
}

StepOutcome SkateEnv::Step(std::span<const double> action, std::span<double> obs) {
  const EnvConfig& cfg = task_->env;
  action_prev_ = action_;
  for (int i = 0; i < kActionDim; ++i) {
    const double a = std::isfinite(action[i]) ? action[i] : nominal_.joints[i];
    action_[i] = std::clamp(a, action_space_.low[i], action_space_.high[i]);
  }
  bool diverged = false;
  for (int k = 0; k < cfg.decimation; ++k) {
    PdTorques(*world_, cfg, action_, state_, torque_);
    if (!dynamics::Step(*world_, {.joint_torques = torque_}, cfg.dt, &state_).ok()) {
      diverged = true;
      break;
    }
  }
  clock_ = clock_.Advance(cfg.dt * cfg.decimation);
  ++steps_;
  const rewards::BodySignals sig = ExtractSignals(*world_, state_);
  breakdown_ = rewards::TotalReward(command_, sig, clock_, {action_prev_, action_, torque_},
                                    task_->reward);
  StepOutcome out;
  out.reward = breakdown_.total;
  if (diverged) {
    out.reason = Termination::kDiverged;
  } else if (std::optional<Termination> t = CheckTermination(*world_, state_, cfg)) {
    out.reason = *t;
  } else if (steps_ >= cfg.max_steps) {
    out.reason = Termination::kTimeout;
  }
  out.done = out.reason != Termination::kNone;
  Observe(obs);
  return out;
}

double SkateEnv::TrackingError() const {
  return (Eigen::Vector2d(command_.v_x, command_.v_y) - state_.v_board.head<2>()).norm();
}

void SkateEnv::Observe(std::span<double> obs) const {
  const dynamics::Multibody& robot = world_->robot();
  const std::vector<int>& dofs = robot.actuated_dofs();
  for (int i = 0; i < kActionDim; ++i) {
    obs[kObsJointPos + i] = state_.q_robot[dofs[i] + 1] - nominal_.joints[i];
    obs[kObsJointVel + i] = state_.v_robot[dofs[i]];
  }
  const Matrix3d r = RootRotation(state_.q_robot);
  const Vector3d gravity = r.transpose() * Vector3d(0.0, 0.0, -1.0);
  const Vector3d lin = r.transpose() * state_.v_robot.head<3>();
  const Vector3d deck = r.transpose() * (state_.q_board.head<3>() - state_.q_robot.head<3>());
  const std::array<double, 2> phase = clock_.Features();
  for (int i = 0; i < 3; ++i) {
    obs[kObsGravity + i] = gravity[i];
    obs[kObsBaseAngVel + i] = state_.v_robot[3 + i];
    obs[kObsBaseLinVel + i] = lin[i];
    obs[kObsDeckPos + i] = deck[i];
    obs[kObsDeckLinVel + i] = state_.v_board[i];
    obs[kObsDeckAngVel + i] = state_.v_board[3 + i];
  }
  obs[kObsCommand + 0] = command_.v_x;
  obs[kObsCommand + 1] = command_.v_y;
  obs[kObsCommand + 2] = command_.yaw_rate;
  obs[kObsClock + 0] = phase[0];
  obs[kObsClock + 1] = phase[1];
}

nlohmann::json FrameJson(const SkateEnv& env, Termination reason) {
  nlohmann::json frame = dynamics::StateToJson(env.state());
  frame["step"] = env.steps();
  frame["action"] = ToStd(env.last_action());
  frame["action_prev"] = ToStd(env.previous_action());
  frame["torque"] = ToStd(env.last_torque());
  const rewards::Command& c = env.command();
  frame["command"] = {c.v_x, c.v_y, c.yaw_rate};
  frame["phase"] = env.clock().phase_time();
  frame["expected_contact"] = {env.clock().ExpectedContact(gait::Foot::kLeft),
                               env.clock().ExpectedContact(gait::Foot::kRight)};
  const rewards::BodySignals sig = ExtractSignals(env.world(), env.state());
  const double f_min = env.task().reward.f_min;
  frame["foot_force"] = {sig.foot_force[0], sig.foot_force[1]};
  frame["contact"] = {sig.foot_force[0] > f_min, sig.foot_force[1] > f_min};
  frame["reward"] = rewards::ToJson(env.breakdown());
  frame["termination"] = std::string(TerminationName(reason));
  return frame;
}

}  // namespace boardpush::env

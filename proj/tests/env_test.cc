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

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include "boardpush/env/deck_toy_env.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracle.h"

namespace boardpush::env {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAreArray;

std::shared_ptr<const TaskSpec> Task(double joint_noise = 0.03, double base_noise = 0.01) {
  auto task = std::make_shared<TaskSpec>();
  task->env.joint_noise = joint_noise;
  task->env.base_noise = base_noise;
  return task;
}

std::unique_ptr<SkateEnv> MakeEnv(std::shared_ptr<const TaskSpec> task) {
  absl::StatusOr<std::unique_ptr<SkateEnv>> env = SkateEnv::Create(std::move(task));
  EXPECT_TRUE(env.ok()) << env.status();
  return *std::move(env);
}

std::vector<double> Obs() { return std::vector<double>(kObsDim); }

// Sole corners of a foot from the independent forward kinematics.
std::vector<Eigen::Vector3d> SoleCorners(const model::ModelParams& params,
                                         const model::KinematicTree& tree,
                                         const Eigen::VectorXd& q, const std::string& foot) {
  const oracle::ChartLagrangian chart(tree, oracle::ChartLagrangian::RootRotation(q));
  const auto [r, p] = chart.BodyPose(oracle::ChartLagrangian::FromLibrary(q), foot);
  const model::RobotParams& rp = params.robot;
  std::vector<Eigen::Vector3d> corners;
  for (double sx : {-0.5, 0.5}) {
    for (double sy : {-0.5, 0.5}) {
      const Eigen::Vector3d local(rp.foot_forward + sx * rp.foot_length, sy * rp.foot_width,
                                  -rp.ankle_height);
      corners.push_back(p + r * local);
    }
  }
  return corners;
}

TEST(SkateEnvTest, ResetIsDeterministicPerSeed) {
  auto a = MakeEnv(Task());
  auto b = MakeEnv(Task());
  std::vector<double> obs_a = Obs();
  std::vector<double> obs_b = Obs();
  a->Reset(17, obs_a);
  b->Reset(17, obs_b);
  EXPECT_EQ(obs_a, obs_b);
  EXPECT_EQ(a->state().q_robot, b->state().q_robot);
  EXPECT_EQ(a->command().v_x, b->command().v_x);
  b->Reset(18, obs_b);
  EXPECT_NE(a->state().q_robot, b->state().q_robot);
}

TEST(SkateEnvTest, ZeroNoiseResetsToNominalPose) {
  auto env = MakeEnv(Task(0.0, 0.0));
  std::vector<double> obs = Obs();
  env->Reset(3, obs);
  const NominalPose& pose = env->nominal();
  const std::vector<int>& dofs = env->world().robot().actuated_dofs();
  for (int i = 0; i < kActionDim; ++i) {
    EXPECT_EQ(env->state().q_robot[dofs[i] + 1], pose.joints[i]) << i;
    EXPECT_EQ(obs[kObsJointPos + i], 0.0);
  }
  EXPECT_EQ(env->state().q_robot.head<3>(), pose.pelvis);
  EXPECT_EQ(env->state().q_board.head<3>(), pose.deck);
  EXPECT_EQ(env->clock().phase_time(), 0.0);
  EXPECT_FALSE(CheckTermination(env->world(), env->state(), env->task().env).has_value());
}

TEST(SkateEnvTest, NominalPoseStandsOnGroundAndDeck) {
  auto env = MakeEnv(Task(0.0, 0.0));
  std::vector<double> obs = Obs();
  env->Reset(0, obs);
  const model::ModelParams& params = env->task().model;
  const double deck_top = env->nominal().deck.z() + 0.5 * params.skateboard.deck_thickness;
  for (const Eigen::Vector3d& c :
       SoleCorners(params, env->world().robot_tree(), env->state().q_robot, "left_foot")) {
    EXPECT_NEAR(c.z(), 0.0, 1e-9);
  }
  for (const Eigen::Vector3d& c :
       SoleCorners(params, env->world().robot_tree(), env->state().q_robot, "right_foot")) {
    EXPECT_NEAR(c.z(), deck_top, 1e-9);
  }
}

TEST(SkateEnvTest, RandomResetsKeepRightSoleOverDeck) {
  auto env = MakeEnv(Task());
  const model::SkateboardParams& board = env->task().model.skateboard;
  std::vector<double> obs = Obs();
  int outside = 0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    env->Reset(seed, obs);
    const Eigen::Vector3d deck = env->state().q_board.head<3>();
    for (const Eigen::Vector3d& c : SoleCorners(env->task().model, env->world().robot_tree(),
                                                env->state().q_robot, "right_foot")) {
      if (std::abs(c.x() - deck.x()) > 0.5 * board.deck_length ||
          std::abs(c.y() - deck.y()) > 0.5 * board.deck_width) {
        ++outside;
      }
    }
  }
  EXPECT_EQ(outside, 0);
}

TEST(SampleCommandTest, ForwardOnlyAndUniform) {
  const EnvConfig cfg;
  std::mt19937_64 rng = MakeRng(5);
  double sum = 0.0;
  double lo = 1.0;
  double hi = 0.0;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    const rewards::Command c = SampleCommand(cfg, rng);
    EXPECT_EQ(c.v_y, 0.0);
    EXPECT_EQ(c.yaw_rate, 0.0);
    sum += c.v_x;
    lo = std::min(lo, c.v_x);
    hi = std::max(hi, c.v_x);
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LE(hi, 1.0);
  EXPECT_NEAR(sum / kDraws, 0.5, 0.02);

  std::mt19937_64 a = MakeRng(9);
  std::mt19937_64 b = MakeRng(9);
  EXPECT_EQ(SampleCommand(cfg, a).v_x, SampleCommand(cfg, b).v_x);
}

TEST(PdTorquesTest, ZeroErrorLinearAndSaturated) {
  auto env = MakeEnv(Task(0.0, 0.0));
  std::vector<double> obs = Obs();
  env->Reset(0, obs);
  const dynamics::World& world = env->world();
  const EnvConfig& cfg = env->task().env;
  dynamics::SimState state = env->state();
  const std::vector<int>& dofs = world.robot().actuated_dofs();
  std::array<double, kActionDim> targets;
  for (int i = 0; i < kActionDim; ++i) targets[i] = state.q_robot[dofs[i] + 1];
  std::array<double, kActionDim> tau;
  PdTorques(world, cfg, targets, state, tau);
  EXPECT_THAT(tau, ::testing::Each(0.0));

  constexpr int kHipPitch = 2;
  ASSERT_EQ(cfg.kp[kHipPitch], 100.0);
  targets[kHipPitch] += 0.1;
  PdTorques(world, cfg, targets, state, tau);
  EXPECT_THAT(tau[kHipPitch], DoubleNear(10.0, 1e-12));

  targets[kHipPitch] += 10.0;
  state.v_robot[dofs[3]] = -100.0;
  PdTorques(world, cfg, targets, state, tau);
  const auto& limits = env->task().model.robot.torque_limits;
  EXPECT_EQ(tau[kHipPitch], limits[kHipPitch]);
  EXPECT_EQ(tau[3], limits[3]);
}

TEST(SkateEnvTest, HoldsNominalPoseForTenSteps) {
  auto env = MakeEnv(Task(0.0, 0.0));
  std::vector<double> obs = Obs();
  env->Reset(0, obs);
  for (int k = 0; k < 10; ++k) {
    const StepOutcome out = env->Step(env->nominal().joints, obs);
    ASSERT_FALSE(out.done) << "step " << k << ": " << TerminationName(out.reason);
    ASSERT_TRUE(std::isfinite(out.reward));
  }
  EXPECT_NEAR(env->clock().phase_time(), 0.2, 1e-12);
}

TEST(CheckTerminationTest, ThresholdRules) {
  auto env = MakeEnv(Task(0.0, 0.0));
  std::vector<double> obs = Obs();
  env->Reset(0, obs);
  const dynamics::World& world = env->world();
  const EnvConfig& cfg = env->task().env;

  dynamics::SimState low = env->state();
  low.q_robot[2] = 0.3;
  EXPECT_EQ(CheckTermination(world, low, cfg), Termination::kFell);

  dynamics::SimState tilted = env->state();
  const Eigen::Quaterniond q(Eigen::AngleAxisd(0.9, Eigen::Vector3d::UnitY()));
  tilted.q_robot.segment<4>(3) << q.w(), q.x(), q.y(), q.z();
  EXPECT_EQ(CheckTermination(world, tilted, cfg), Termination::kTilted);

  dynamics::SimState lost = env->state();
  lost.q_board[0] += 0.5;
  EXPECT_EQ(CheckTermination(world, lost, cfg), Termination::kBoardLost);

  // Fell is reported first when several rules match.
  lost.q_robot[2] = 0.3;
  EXPECT_EQ(CheckTermination(world, lost, cfg), Termination::kFell);
}

TEST(SkateEnvTest, StepReportsFellAndTimeout) {
  auto env = MakeEnv(Task(0.0, 0.0));
  std::vector<double> obs = Obs();
  env->Reset(0, obs);
  dynamics::SimState low = env->state();
  low.q_robot[2] = 0.3;
  env->SetState(low);
  StepOutcome out = env->Step(env->nominal().joints, obs);
  EXPECT_TRUE(out.done);
  EXPECT_EQ(out.reason, Termination::kFell);

  auto task = std::make_shared<TaskSpec>(*Task(0.0, 0.0));
  task->env.max_steps = 3;
  auto short_env = MakeEnv(task);
  short_env->Reset(0, obs);
  for (int k = 0; k < 3; ++k) out = short_env->Step(short_env->nominal().joints, obs);
  EXPECT_TRUE(out.done);
  EXPECT_EQ(out.reason, Termination::kTimeout);
  EXPECT_EQ(short_env->steps(), 3);
}

TEST(SkateEnvTest, DivergenceKeepsLastValidState) {
  auto env = MakeEnv(Task(0.0, 0.0));
  std::vector<double> obs = Obs();
  env->Reset(0, obs);
  dynamics::SimState wild = env->state();
  wild.v_robot[0] = 1e300;
  env->SetState(wild);
  const StepOutcome out = env->Step(env->nominal().joints, obs);
  EXPECT_TRUE(out.done);
  EXPECT_EQ(out.reason, Termination::kDiverged);
  EXPECT_TRUE(env->state().q_robot.allFinite());
  EXPECT_EQ(env->state().t, wild.t);
}

TEST(SkateEnvTest, NonFiniteActionFallsBackToNominal) {
  auto env = MakeEnv(Task(0.0, 0.0));
  std::vector<double> obs = Obs();
  env->Reset(0, obs);
  std::array<double, kActionDim> action = env->nominal().joints;
  action[0] = std::nan("");
  action[3] = 100.0;
  env->Step(action, obs);
  EXPECT_EQ(env->last_action()[0], env->nominal().joints[0]);
  EXPECT_EQ(env->last_action()[3], env->action_space().high[3]);
}

// Golden layout: every block is written at its declared offset.
TEST(ObservationTest, GoldenLayout) {
  static_assert(kObsDim == 47);
  static_assert(kObsJointVel - kObsJointPos == 12 && kObsGravity - kObsJointVel == 12);
  static_assert(kObsBaseAngVel - kObsGravity == 3 && kObsBaseLinVel - kObsBaseAngVel == 3);
  static_assert(kObsCommand - kObsBaseLinVel == 3 && kObsClock - kObsCommand == 3);
  static_assert(kObsDeckPos - kObsClock == 2 && kObsDeckLinVel - kObsDeckPos == 3);
  static_assert(kObsDeckAngVel - kObsDeckLinVel == 3 && kObsDim - kObsDeckAngVel == 3);

  auto task = std::make_shared<TaskSpec>(*Task(0.0, 0.0));
  task->env.fixed_command = 0.4;
  auto env = MakeEnv(task);
  std::vector<double> obs = Obs();
  env->Reset(0, obs);
  dynamics::SimState s = env->state();
  // Pelvis yawed by 90 degrees so that base-frame blocks are distinguishable.
  const double yaw = M_PI / 2;
  s.q_robot.segment<4>(3) << std::cos(yaw / 2), 0.0, 0.0, std::sin(yaw / 2);
  for (int i = 0; i < s.v_robot.size(); ++i) s.v_robot[i] = 0.01 * (i + 1);
  for (int i = 0; i < s.v_board.size(); ++i) s.v_board[i] = -0.1 * (i + 1);
  env->SetState(s);
  env->Observe(obs);

  const std::vector<int>& dofs = env->world().robot().actuated_dofs();
  for (int i = 0; i < kActionDim; ++i) {
    EXPECT_EQ(obs[kObsJointVel + i], s.v_robot[dofs[i]]);
  }
  EXPECT_THAT(std::vector<double>(obs.begin() + kObsGravity, obs.begin() + kObsGravity + 3),
              ::testing::ElementsAre(DoubleNear(0, 1e-15), DoubleNear(0, 1e-15), -1.0));
  EXPECT_THAT(std::vector<double>(obs.begin() + kObsBaseAngVel, obs.begin() + kObsBaseAngVel + 3),
              ElementsAreArray({0.04, 0.05, 0.06}));
  // World (0.01, 0.02, 0.03) seen from a frame yawed by +90 degrees.
  EXPECT_THAT(std::vector<double>(obs.begin() + kObsBaseLinVel, obs.begin() + kObsBaseLinVel + 3),
              ::testing::ElementsAre(DoubleNear(0.02, 1e-15), DoubleNear(-0.01, 1e-15),
                                DoubleNear(0.03, 1e-15)));
  EXPECT_THAT(std::vector<double>(obs.begin() + kObsCommand, obs.begin() + kObsCommand + 3),
              ElementsAreArray({0.4, 0.0, 0.0}));
  const std::array<double, 2> clock = env->clock().Features();
  EXPECT_EQ(obs[kObsClock], clock[0]);
  EXPECT_EQ(obs[kObsClock + 1], clock[1]);
  const Eigen::Vector3d rel = s.q_board.head<3>() - s.q_robot.head<3>();
  EXPECT_NEAR(obs[kObsDeckPos + 0], rel.y(), 1e-15);
  EXPECT_NEAR(obs[kObsDeckPos + 1], -rel.x(), 1e-15);
  EXPECT_NEAR(obs[kObsDeckPos + 2], rel.z(), 1e-15);
}

TEST(ObservationTest, DeckBlockMatchesDynamicsState) {
  auto env = MakeEnv(Task());
  std::vector<double> obs = Obs();
  env->Reset(11, obs);
  for (int k = 0; k < 5; ++k) env->Step(env->nominal().joints, obs);
  const dynamics::SimState& s = env->state();
  const Eigen::Matrix3d r = oracle::ChartLagrangian::RootRotation(s.q_robot);
  const Eigen::Vector3d rel = r.transpose() * (s.q_board.head<3>() - s.q_robot.head<3>());
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(obs[kObsDeckPos + i], rel[i], 1e-12);
    EXPECT_NEAR(obs[kObsDeckLinVel + i], s.v_board[i], 1e-12);
    EXPECT_NEAR(obs[kObsDeckAngVel + i], s.v_board[3 + i], 1e-12);
  }
  for (double x : obs) EXPECT_TRUE(std::isfinite(x));
}

// The logged frame alone reproduces the reported reward.
TEST(SkateEnvTest, RewardAuditFromLoggedFrame) {
  auto env = MakeEnv(Task());
  std::vector<double> obs = Obs();
  env->Reset(21, obs);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  for (int k = 0; k < 20; ++k) {
    std::array<double, kActionDim> action = env->nominal().joints;
    for (double& a : action) a += noise(rng);
    const StepOutcome out = env->Step(action, obs);
    const nlohmann::json frame = FrameJson(*env, out.reason);
    const nlohmann::json round = nlohmann::json::parse(frame.dump());

    absl::StatusOr<dynamics::SimState> state = dynamics::StateFromJson(env->world(), round);
    ASSERT_TRUE(state.ok()) << state.status();
    const auto cmd = round.at("command").get<std::array<double, 3>>();
    const auto prev = round.at("action_prev").get<std::vector<double>>();
    const auto act = round.at("action").get<std::vector<double>>();
    const auto tau = round.at("torque").get<std::vector<double>>();
    const gait::GaitClock clock(env->task().gait, round.at("phase").get<double>());
    const rewards::RewardBreakdown recomputed = rewards::TotalReward(
        {cmd[0], cmd[1], cmd[2]}, ExtractSignals(env->world(), *state), clock, {prev, act, tau},
        env->task().reward);
    EXPECT_EQ(recomputed.total, out.reward) << "step " << k;
    EXPECT_EQ(round.at("reward").at("total").get<double>(), out.reward);
    if (out.done) break;
  }
}

TEST(SkateEnvTest, IdenticalStateAndActionStepBitIdentically) {
  auto a = MakeEnv(Task());
  auto b = MakeEnv(Task());
  std::vector<double> obs_a = Obs();
  std::vector<double> obs_b = Obs();
  a->Reset(8, obs_a);
  b->Reset(8, obs_b);
  for (int k = 0; k < 15; ++k) {
    std::array<double, kActionDim> action = a->nominal().joints;
    action[k % kActionDim] += 0.1;
    const StepOutcome oa = a->Step(action, obs_a);
    const StepOutcome ob = b->Step(action, obs_b);
    ASSERT_EQ(oa.reward, ob.reward);
    ASSERT_EQ(obs_a, obs_b);
  }
}

TEST(EnvConfigTest, RejectsInvalidFields) {
  EnvConfig cfg;
  EXPECT_TRUE(ValidateEnvConfig(cfg).ok());
  cfg.kp[4] = 0.0;
  EXPECT_THAT(std::string(ValidateEnvConfig(cfg).message()),
              ::testing::HasSubstr("env.kp.ankle_pitch"));
  cfg = EnvConfig();
  cfg.min_pelvis_height = -1.0;
  EXPECT_FALSE(ValidateEnvConfig(cfg).ok());
  cfg = EnvConfig();
  cfg.command_max = 1.5;
  EXPECT_FALSE(ValidateEnvConfig(cfg).ok());
}

TEST(DeckToyEnvTest, ForcePushesDeckAndEpisodeTimesOut) {
  auto env = *DeckToyEnv::Create(model::ModelParams());
  std::vector<double> obs(DeckToyEnv::kObsDim);
  env->Reset(2, obs);
  EXPECT_EQ(obs[3], env->command());
  EXPECT_EQ(obs[4], env->command());
  const std::array<double, 1> push = {1.0};
  StepOutcome out = env->Step(push, obs);
  // Impulse of 20 N over 20 ms on the whole board, less rolling losses.
  dynamics::WorldOptions options;
  options.with_robot = false;
  const dynamics::World world = *dynamics::World::Create(model::ModelParams(), options);
  const double board_mass = world.board().total_mass();
  EXPECT_NEAR(obs[0], 20.0 * 0.02 / board_mass, 0.01);
  EXPECT_EQ(out.reward, env->LastTerms()[0]);
  int steps = 1;
  while (!out.done) {
    out = env->Step(std::array<double, 1>{0.0}, obs);
    ++steps;
  }
  EXPECT_EQ(steps, 100);
  EXPECT_EQ(out.reason, Termination::kTimeout);
}

}  // namespace
}  // namespace boardpush::env

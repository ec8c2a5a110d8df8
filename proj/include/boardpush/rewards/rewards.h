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

// Deck tracking and foot-on-deck rewards, periodic contact rewards and the
// base regularization set, combined into one weighted total.

#ifndef BOARDPUSH_REWARDS_REWARDS_H_
#define BOARDPUSH_REWARDS_REWARDS_H_

#include <array>
#include <span>
#include <string_view>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "boardpush/gait/gait.h"
#include "json.hpp"

namespace boardpush::rewards {

// Commanded planar velocity. This task only commands forward speed.
struct Command {
  double v_x = 0.0;
  double v_y = 0.0;
  double yaw_rate = 0.0;
};

absl::Status ValidateCommand(const Command& cmd);

// Kinematic quantities read off one simulation state. Feet are indexed
// 0 = left, 1 = right.
struct BodySignals {
  Eigen::Vector2d v_deck_xy = Eigen::Vector2d::Zero();
  double w_deck_z = 0.0;
  Eigen::Vector2d w_deck_xy = Eigen::Vector2d::Zero();
  Eigen::Vector3d v_right = Eigen::Vector3d::Zero();
  Eigen::Vector2d v_right_xy = Eigen::Vector2d::Zero();
  Eigen::Vector2d w_right_xy = Eigen::Vector2d::Zero();
  Eigen::Vector2d v_com_xy = Eigen::Vector2d::Zero();
  double w_base_z = 0.0;
  std::array<double, 2> foot_force = {0.0, 0.0};  // total normal force, N
  std::array<double, 2> foot_speed = {0.0, 0.0};  // m/s
  bool right_on_deck = false;
};

enum Term {
  kDeckLinearTracking,
  kDeckAngularTracking,
  kDeckFootVelocity,
  kFootSlip,
  kFootRotation,
  kComTracking,
  kBaseYawTracking,
  kPeriodicContact,
  kActionRate,
  kTorque,
  kAlive,
  kNumTerms,
};

inline constexpr std::array<std::string_view, kNumTerms> kTermNames = {
    "deck_lin_track", "deck_ang_track", "deck_foot_vel", "foot_slip",
    "foot_rot",       "com_lin_track",  "base_yaw_track", "periodic_contact",
    "action_rate",    "torque",         "alive"};

struct RewardConfig {
  double sigma = 0.25;
  // Weights in Term order.
  std::array<double, kNumTerms> weights = {1.0, 1.0, 0.5, -1.0, -1.0, 1.0,
                                           0.5, 1.0, -0.01, -2e-5, 0.5};
  double f_min = 20.0;  // N, loaded-foot threshold
};

absl::Status ValidateConfig(const RewardConfig& cfg);

struct RewardBreakdown {
  std::array<double, kNumTerms> terms = {};  // unweighted
  double total = 0.0;
};

double DeckLinearTracking(const Command& cmd, const BodySignals& sig, double sigma);
double DeckAngularTracking(const Command& cmd, const BodySignals& sig, double sigma);
// Squared world speed of the right foot; zero unless it stands on the deck.
double DeckFootVelocity(const BodySignals& sig);
double FootSlip(const BodySignals& sig);
double FootRotation(const BodySignals& sig);

// Periodic contact reward summed over both feet: expected contact earns the
// loaded indicator, expected swing earns the unloaded indicator.
double PeriodicContact(const BodySignals& sig, const gait::GaitClock& clock, double f_min);

struct BaseInputs {
  std::span<const double> action_prev;
  std::span<const double> action;
  std::span<const double> torque;
};

// Fills the base terms (CoM and yaw tracking, periodic contact, action rate,
// torque, alive) of `out`.
void BaseRewards(const Command& cmd, const BodySignals& sig, const gait::GaitClock& clock,
                 const BaseInputs& inputs, const RewardConfig& cfg, RewardBreakdown* out);

RewardBreakdown TotalReward(const Command& cmd, const BodySignals& sig,
                            const gait::GaitClock& clock, const BaseInputs& inputs,
                            const RewardConfig& cfg);

nlohmann::json ToJson(const RewardConfig& cfg);
nlohmann::json ToJson(const RewardBreakdown& breakdown);

}  // namespace boardpush::rewards

#endif  // BOARDPUSH_REWARDS_REWARDS_H_

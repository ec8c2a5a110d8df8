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

#include "boardpush/rewards/rewards.h"

#include <cmath>
#include <string>

#include "absl/strings/str_cat.h"

namespace boardpush::rewards {

absl::Status ValidateCommand(const Command& cmd) {
  if (!(cmd.v_x >= 0.0 && cmd.v_x <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("command v_x must lie in [0, 1] (got ", cmd.v_x, ")"));
  }
  if (cmd.v_y != 0.0 || cmd.yaw_rate != 0.0) {
    return absl::InvalidArgumentError("command v_y and yaw_rate must be 0");
  }
  return absl::OkStatus();
}

absl::Status ValidateConfig(const RewardConfig& cfg) {
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("reward.sigma must be > 0 (got ", cfg.sigma, ")"));
  }
  for (int i = 0; i < kNumTerms; ++i) {
    if (!std::isfinite(cfg.weights[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("reward.weights.", std::string(kTermNames[i]), " must be finite"));
    }
  }
  for (const Term penalty : {kFootSlip, kFootRotation, kActionRate, kTorque}) {
    if (cfg.weights[penalty] > 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "reward.weights.", std::string(kTermNames[penalty]), " is a penalty and must be <= 0"));
    }
  }
  if (!(cfg.f_min >= 0.0) || !std::isfinite(cfg.f_min)) {
    return absl::InvalidArgumentError("reward.f_min must be >= 0");
  }
  return absl::OkStatus();
}

double DeckLinearTracking(const Command& cmd, const BodySignals& sig, double sigma) {
  const Eigen::Vector2d err = Eigen::Vector2d(cmd.v_x, cmd.v_y) - sig.v_deck_xy;
  return std::exp(-err.squaredNorm() / sigma);
}

double DeckAngularTracking(const Command& cmd, const BodySignals& sig, double sigma) {
  const double err = cmd.yaw_rate - sig.w_deck_z;
  return std::exp(-err * err / sigma);
}

double DeckFootVelocity(const BodySignals& sig) {
  return sig.right_on_deck ? sig.v_right.squaredNorm() : 0.0;
}

double FootSlip(const BodySignals& sig) { return (sig.v_deck_xy - sig.v_right_xy).squaredNorm(); }

double FootRotation(const BodySignals& sig) {
  return (sig.w_deck_xy - sig.w_right_xy).squaredNorm();
}

double PeriodicContact(const BodySignals& sig, const gait::GaitClock& clock, double f_min) {
  double total = 0.0;
  for (int side = 0; side < 2; ++side) {
    const double expected =
        clock.ExpectedContact(side == 0 ? gait::Foot::kLeft : gait::Foot::kRight);
    const bool loaded = sig.foot_force[side] > f_min;
    total += expected * (loaded ? 1.0 : 0.0) + (1.0 - expected) * (loaded ? 0.0 : 1.0);
  }
  return total;
}

void BaseRewards(const Command& cmd, const BodySignals& sig, const gait::GaitClock& clock,
                 const BaseInputs& inputs, const RewardConfig& cfg, RewardBreakdown* out) {
  const Eigen::Vector2d com_err = Eigen::Vector2d(cmd.v_x, cmd.v_y) - sig.v_com_xy;
  out->terms[kComTracking] = std::exp(-com_err.squaredNorm() / cfg.sigma);
  const double yaw_err = cmd.yaw_rate - sig.w_base_z;
  out->terms[kBaseYawTracking] = std::exp(-yaw_err * yaw_err / cfg.sigma);
  out->terms[kPeriodicContact] = PeriodicContact(sig, clock, cfg.f_min);
  double rate = 0.0;
  if (inputs.action_prev.size() == inputs.action.size()) {
    for (size_t i = 0; i < inputs.action.size(); ++i) {
      const double d = inputs.action[i] - inputs.action_prev[i];
      rate += d * d;
    }
  }
  out->terms[kActionRate] = rate;
  double torque = 0.0;
  for (double t : inputs.torque) torque += t * t;
  out->terms[kTorque] = torque;
  out->terms[kAlive] = 1.0;
}

RewardBreakdown TotalReward(const Command& cmd, const BodySignals& sig,
                            const gait::GaitClock& clock, const BaseInputs& inputs,
                            const RewardConfig& cfg) {
  RewardBreakdown out;
  out.terms[kDeckLinearTracking] = DeckLinearTracking(cmd, sig, cfg.sigma);
  out.terms[kDeckAngularTracking] = DeckAngularTracking(cmd, sig, cfg.sigma);
  out.terms[kDeckFootVelocity] = DeckFootVelocity(sig);
  out.terms[kFootSlip] = FootSlip(sig);
  out.terms[kFootRotation] = FootRotation(sig);
  BaseRewards(cmd, sig, clock, inputs, cfg, &out);
  out.total = 0.0;
  for (int i = 0; i < kNumTerms; ++i) out.total += cfg.weights[i] * out.terms[i];
  return out;
}

nlohmann::json ToJson(const RewardConfig& cfg) {
  nlohmann::json weights = nlohmann::json::object();
  for (int i = 0; i < kNumTerms; ++i) weights[std::string(kTermNames[i])] = cfg.weights[i];
  return {{"sigma", cfg.sigma}, {"f_min", cfg.f_min}, {"weights", weights}};
}

nlohmann::json ToJson(const RewardBreakdown& breakdown) {
  nlohmann::json out = nlohmann::json::object();
  for (int i = 0; i < kNumTerms; ++i) out[std::string(kTermNames[i])] = breakdown.terms[i];
  out["total"] = breakdown.total;
  return out;
}

}  // namespace boardpush::rewards

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

// Robot and skateboard stepped together, coupled through foot-deck contact.

#ifndef BOARDPUSH_DYNAMICS_SIM_H_
#define BOARDPUSH_DYNAMICS_SIM_H_

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "boardpush/dynamics/contact.h"
#include "boardpush/dynamics/multibody.h"
#include "boardpush/model/model.h"
#include "json.hpp"

namespace boardpush::dynamics {

// Payload key of the state snapshot attached to divergence errors.
inline constexpr char kSnapshotPayload[] = "boardpush.snapshot";

struct SimState {
  Eigen::VectorXd q_robot;  // empty in a board-only world
  Eigen::VectorXd v_robot;
  Eigen::VectorXd q_board;
  Eigen::VectorXd v_board;
  double t = 0.0;
  std::vector<ActiveContact> contacts;
};

struct WorldOptions {
  ContactMaterial material;
  spatial::Vec3 gravity = spatial::Vec3(0.0, 0.0, -9.81);
  bool with_robot = true;
  // Keeps each contact-free tree's momentum on its exact impulse balance.
  bool momentum_projection = true;
};

// Compiled trees plus everything the stepper looks up by name.
class World {
 public:
  static absl::StatusOr<World> Create(const model::ModelParams& params,
                                      const WorldOptions& options = {});

  const model::ModelParams& params() const { return params_; }
  const WorldOptions& options() const { return options_; }
  bool has_robot() const { return options_.with_robot; }
  const Multibody& robot() const { return robot_; }
  const Multibody& board() const { return board_; }
  const model::KinematicTree& robot_tree() const { return robot_tree_; }
  const model::KinematicTree& board_tree() const { return board_tree_; }

  int pelvis() const { return 0; }
  int foot(int side) const { return feet_[side]; }  // 0 left, 1 right
  int deck() const { return 0; }
  int hanger(int front_or_rear) const { return hangers_[front_or_rear]; }  // 0 front

  // Zero joint angles, identity root poses, board wheels resting on the
  // ground; the robot pelvis at the origin.
  SimState DefaultState() const;

 private:
  model::ModelParams params_;
  WorldOptions options_;
  model::KinematicTree robot_tree_;
  model::KinematicTree board_tree_;
  Multibody robot_;
  Multibody board_;
  std::array<int, 2> feet_ = {-1, -1};
  std::array<int, 2> hangers_ = {-1, -1};
};

struct StepInput {
  // Actuated joint torques in Multibody::actuated_dofs() order; empty means
  // zero.
  std::span<const double> joint_torques;
  // World force applied at the deck center of mass.
  spatial::Vec3 deck_force = spatial::Vec3::Zero();
};

// Deck roll angle (positive with the +y edge down) of a board configuration.
double DeckRoll(const Eigen::Ref<const Eigen::VectorXd>& q_board);

// Contacts of the state as it stands, with normal_force filled in.
std::vector<ActiveContact> DetectContacts(const World& world, const SimState& state);

// Advances by dt in (0, 0.01]. On success the state holds the successor and
// the contacts evaluated during the step. A non-finite result leaves the
// state untouched and returns kInternal with the snapshot payload.
absl::Status Step(const World& world, const StepInput& input, double dt, SimState* state);
absl::StatusOr<SimState> Step(const World& world, const SimState& state, const StepInput& input,
                              double dt);

// Invariants: sizes, finiteness, unit root quaternions, t >= 0.
absl::Status CheckState(const World& world, const SimState& state);

nlohmann::json StateToJson(const SimState& state);
// Logged contact records are restored as written (summary fields only);
// without a "contacts" key they are detected from the configuration.
absl::StatusOr<SimState> StateFromJson(const World& world, const nlohmann::json& object);

}  // namespace boardpush::dynamics

#endif  // BOARDPUSH_DYNAMICS_SIM_H_

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

// Kinematic trees for the reduced humanoid and the skateboard, plus the
// physical parameter set they are built from.

#ifndef BOARDPUSH_MODEL_MODEL_H_
#define BOARDPUSH_MODEL_MODEL_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace boardpush::model {

inline constexpr std::string_view kWorld = "world";

// Body and joint names that the simulator and environment look up.
inline constexpr std::string_view kPelvis = "pelvis";
inline constexpr std::string_view kLeftFoot = "left_foot";
inline constexpr std::string_view kRightFoot = "right_foot";
inline constexpr std::string_view kDeck = "deck";
inline constexpr std::string_view kFrontHanger = "front_hanger";
inline constexpr std::string_view kRearHanger = "rear_hanger";

// Per-leg joint order, hip to ankle. The 12 actuated joints are the left leg
// in this order followed by the right leg.
inline constexpr int kLegJoints = 6;
inline constexpr int kActuatedJoints = 2 * kLegJoints;
inline constexpr std::array<std::string_view, kLegJoints> kLegJointNames = {
    "hip_yaw", "hip_roll", "hip_pitch", "knee", "ankle_pitch", "ankle_roll"};

enum class GeomKind { kSphere, kBox, kCapsule };

// Collision primitive in body coordinates. `size` holds the radius (sphere),
// the full edge lengths (box), or {radius, length, -} (capsule along z).
struct Geom {
  GeomKind kind = GeomKind::kSphere;
  Eigen::Vector3d size = Eigen::Vector3d::Zero();
  Eigen::Vector3d pos = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
};

struct BodySpec {
  std::string name;
  double mass = 0.0;
  // Rotational inertia about the center of mass, body frame.
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();
  Eigen::Vector3d com_offset = Eigen::Vector3d::Zero();
  std::vector<Geom> geometry;
};

enum class JointKind { kFree6, kRevolute };

struct JointLimits {
  double lo = 0.0;
  double hi = 0.0;
};

// Joint placing `child` relative to `parent`. The child body frame coincides
// with the joint frame, which sits at `origin_pos`/`origin_rot` in the parent
// frame (world for the root) before the joint's own motion.
struct JointSpec {
  std::string name;
  JointKind kind = JointKind::kRevolute;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  std::string parent;
  std::string child;
  Eigen::Vector3d origin_pos = Eigen::Vector3d::Zero();
  Eigen::Matrix3d origin_rot = Eigen::Matrix3d::Identity();
  std::optional<JointLimits> limits;
  double stiffness = 0.0;  // N*m/rad
  double damping = 0.0;    // N*m*s/rad
  bool actuated = false;
};

struct KinematicTree {
  std::vector<BodySpec> bodies;
  std::vector<JointSpec> joints;
  int nq = 0;
  int nv = 0;

  double TotalMass() const;
  int NumActuated() const;
  const BodySpec* FindBody(std::string_view name) const;
  const JointSpec* FindJoint(std::string_view name) const;
};

struct RobotParams {
  // Pelvis with the fixed upper body (torso, arms, head) lumped in.
  double pelvis_mass = 52.0;
  Eigen::Vector3d pelvis_com = {0.02, 0.0, 0.25};
  Eigen::Vector3d pelvis_extent = {0.25, 0.35, 0.60};
  double hip_width = 0.20;  // distance between the two hip joint centers
  double hip_drop = 0.08;   // hip joints below the pelvis origin
  double hip_link_mass = 1.0;  // each of the hip yaw and hip roll links
  double thigh_length = 0.38;
  double thigh_mass = 6.0;
  double shank_length = 0.38;
  double shank_mass = 4.0;
  double limb_radius = 0.06;
  double ankle_link_mass = 0.5;
  double foot_mass = 1.5;
  double foot_length = 0.22;
  double foot_width = 0.12;
  double ankle_height = 0.08;   // ankle joint above the sole
  double foot_forward = 0.03;   // sole center ahead of the ankle
  // Left-leg limits in kLegJointNames order; the right leg mirrors yaw/roll.
  std::array<JointLimits, kLegJoints> leg_limits = {{
      {-0.6, 0.6}, {-0.5, 0.5}, {-1.8, 0.6}, {0.0, 2.4}, {-1.0, 0.8}, {-0.5, 0.5}}};
  std::array<double, kLegJoints> torque_limits = {150.0, 150.0, 200.0, 250.0, 120.0, 80.0};
};

struct SkateboardParams {
  double deck_mass = 2.0;
  double deck_length = 0.80;
  double deck_width = 0.21;
  double deck_thickness = 0.015;
  double truck_rake = 0.7853981633974483;  // pivot axis inclination, rad
  double truck_stiffness = 20.0;           // N*m/rad
  double truck_damping = 0.5;              // N*m*s/rad
  double wheelbase = 0.55;      // distance between the truck pivots
  double truck_height = 0.04;   // pivots below the deck center
  double hanger_mass = 0.6;     // hanger with its two wheels
  double wheel_track = 0.18;    // lateral distance between wheel centers
  double axle_drop = 0.02;      // wheel centers below the pivot
  double wheel_radius = 0.027;
};

struct FrictionParams {
  double mu_ground_foot = 0.8;
  double mu_deck_foot = 1.2;   // grip tape
  double mu_wheel_lat = 0.9;
  double mu_wheel_roll = 0.002;
};

struct ModelParams {
  RobotParams robot;
  SkateboardParams skateboard;
  FrictionParams friction;
};

// Checks the parameter invariants; the error names the offending field.
absl::Status ValidateParams(const ModelParams& params);

// Floating pelvis plus two 6-joint legs (nq = 19, nv = 18).
absl::StatusOr<KinematicTree> BuildRobotTree(const ModelParams& params);

// Floating deck plus two spring-loaded trucks carrying the wheels (nq = 9,
// nv = 8).
absl::StatusOr<KinematicTree> BuildSkateboardTree(const ModelParams& params);

// One human-readable diagnostic per violated tree invariant; empty when the
// tree is well formed.
std::vector<std::string> ValidateTree(const KinematicTree& tree);

// Mirrored right-leg limits for joint index `j` of kLegJointNames.
JointLimits RightLegLimits(const RobotParams& robot, int j);

// Model parameter file (schema 1, SI units).
inline constexpr int kModelSchema = 1;
nlohmann::json ToJson(const ModelParams& params);
// Reads a parameter object, starting from defaults. Unknown fields and type
// errors are reported with their dotted path.
absl::StatusOr<ModelParams> ModelParamsFromJson(const nlohmann::json& object);

}  // namespace boardpush::model

#endif  // BOARDPUSH_MODEL_MODEL_H_

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

#include "boardpush/model/model.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace boardpush::model {
namespace {

using Eigen::Matrix3d;
using Eigen::Vector3d;

Matrix3d BoxInertia(double mass, const Vector3d& extent) {
  const Vector3d sq = extent.cwiseProduct(extent);
  return (mass / 12.0) * Vector3d(sq.y() + sq.z(), sq.x() + sq.z(), sq.x() + sq.y())
                             .asDiagonal().toDenseMatrix();
}

// Solid cylinder along z.
Matrix3d CylinderInertia(double mass, double radius, double length) {
  const double transverse = mass * (3.0 * radius * radius + length * length) / 12.0;
  return Vector3d(transverse, transverse, 0.5 * mass * radius * radius)
      .asDiagonal().toDenseMatrix();
}

Matrix3d SphereInertia(double mass, double radius) {
  return (0.4 * mass * radius * radius) * Matrix3d::Identity();
}

class ParamChecker {
 public:
  void Positive(const char* field, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      errors_.push_back(absl::StrCat(field, " must be > 0 (got ", value, ")"));
    }
  }
  void NonNegative(const char* field, double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      errors_.push_back(absl::StrCat(field, " must be >= 0 (got ", value, ")"));
    }
  }
  void Require(bool ok, std::string message) {
    if (!ok) errors_.push_back(std::move(message));
  }
  absl::Status Status() const {
    if (errors_.empty()) return absl::OkStatus();
    return absl::InvalidArgumentError(
        absl::StrCat("invalid-parameter: ", absl::StrJoin(errors_, "; ")));
  }

 private:
  std::vector<std::string> errors_;
};

JointSpec Revolute(std::string name, const std::string& parent, const std::string& child,
                   const Vector3d& axis, const Vector3d& origin) {
  JointSpec joint;
  joint.name = std::move(name);
  joint.kind = JointKind::kRevolute;
  joint.axis = axis;
  joint.parent = parent;
  joint.child = child;
  joint.origin_pos = origin;
  return joint;
}

JointSpec FreeRoot(const std::string& child) {
  JointSpec joint;
  joint.name = "root";
  joint.kind = JointKind::kFree6;
  joint.parent = std::string(kWorld);
  joint.child = child;
  joint.axis = Vector3d::Zero();
  return joint;
}

void FinalizeDimensions(KinematicTree* tree) {
  int revolute = 0;
  for (const auto& j : tree->joints) revolute += j.kind == JointKind::kRevolute;
  tree->nq = 7 + revolute;
  tree->nv = 6 + revolute;
}

bool IsFiniteMatrix(const Matrix3d& m) { return m.allFinite(); }

}  // namespace

double KinematicTree::TotalMass() const {
  double total = 0.0;
  for (const auto& b : bodies) total += b.mass;
  return total;
}

int KinematicTree::NumActuated() const {
  int n = 0;
  for (const auto& j : joints) n += j.actuated;
  return n;
}

const BodySpec* KinematicTree::FindBody(std::string_view name) const {
  for (const auto& b : bodies) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

const JointSpec* KinematicTree::FindJoint(std::string_view name) const {
  for (const auto& j : joints) {
    if (j.name == name) return &j;
  }
  return nullptr;
}

JointLimits RightLegLimits(const RobotParams& robot, int j) {
  const JointLimits& left = robot.leg_limits[j];
  // Yaw and roll axes flip sense under the sagittal mirror.
  if (j == 0 || j == 1 || j == 5) return {-left.hi, -left.lo};
  return left;
}

absl::Status ValidateParams(const ModelParams& params) {
  ParamChecker check;
  const RobotParams& r = params.robot;
  check.Positive("robot.pelvis_mass", r.pelvis_mass);
  for (int i = 0; i < 3; ++i) check.Positive("robot.pelvis_extent", r.pelvis_extent[i]);
  check.Require(r.pelvis_com.allFinite(), "robot.pelvis_com must be finite");
  check.Positive("robot.hip_width", r.hip_width);
  check.NonNegative("robot.hip_drop", r.hip_drop);
  check.Positive("robot.hip_link_mass", r.hip_link_mass);
  check.Positive("robot.thigh_length", r.thigh_length);
  check.Positive("robot.thigh_mass", r.thigh_mass);
  check.Positive("robot.shank_length", r.shank_length);
  check.Positive("robot.shank_mass", r.shank_mass);
  check.Positive("robot.limb_radius", r.limb_radius);
  check.Positive("robot.ankle_link_mass", r.ankle_link_mass);
  check.Positive("robot.foot_mass", r.foot_mass);
  check.Positive("robot.foot_length", r.foot_length);
  check.Positive("robot.foot_width", r.foot_width);
  check.Positive("robot.ankle_height", r.ankle_height);
  check.Require(std::isfinite(r.foot_forward), "robot.foot_forward must be finite");
  for (int j = 0; j < kLegJoints; ++j) {
    const auto& lim = r.leg_limits[j];
    check.Require(std::isfinite(lim.lo) && std::isfinite(lim.hi) && lim.lo < lim.hi,
                  absl::StrCat("robot.leg_limits.", std::string(kLegJointNames[j]), " requires lo < hi"));
    check.Positive("robot.torque_limits", r.torque_limits[j]);
  }

  const SkateboardParams& s = params.skateboard;
  check.Positive("skateboard.deck_mass", s.deck_mass);
  check.Positive("skateboard.deck_length", s.deck_length);
  check.Positive("skateboard.deck_width", s.deck_width);
  check.Positive("skateboard.deck_thickness", s.deck_thickness);
  check.Require(s.truck_rake > 0.0 && s.truck_rake < std::numbers::pi / 2,
                absl::StrCat("skateboard.truck_rake must lie in (0, pi/2) (got ",
                             s.truck_rake, ")"));
  check.Positive("skateboard.truck_stiffness", s.truck_stiffness);
  check.NonNegative("skateboard.truck_damping", s.truck_damping);
  check.Positive("skateboard.wheelbase", s.wheelbase);
  check.Positive("skateboard.truck_height", s.truck_height);
  check.Positive("skateboard.hanger_mass", s.hanger_mass);
  check.Positive("skateboard.wheel_track", s.wheel_track);
  check.NonNegative("skateboard.axle_drop", s.axle_drop);
  check.Positive("skateboard.wheel_radius", s.wheel_radius);

  const FrictionParams& f = params.friction;
  check.Positive("friction.mu_ground_foot", f.mu_ground_foot);
  check.Positive("friction.mu_deck_foot", f.mu_deck_foot);
  check.Positive("friction.mu_wheel_lat", f.mu_wheel_lat);
  check.Positive("friction.mu_wheel_roll", f.mu_wheel_roll);
  check.Require(f.mu_deck_foot > f.mu_ground_foot,
                "friction.mu_deck_foot must exceed friction.mu_ground_foot");
  return check.Status();
}

absl::StatusOr<KinematicTree> BuildRobotTree(const ModelParams& params) {
  if (absl::Status status = ValidateParams(params); !status.ok()) return status;
  const RobotParams& r = params.robot;
  KinematicTree tree;

  BodySpec pelvis;
  pelvis.name = std::string(kPelvis);
  pelvis.mass = r.pelvis_mass;
  pelvis.com_offset = r.pelvis_com;
  pelvis.inertia = BoxInertia(r.pelvis_mass, r.pelvis_extent);
  tree.bodies.push_back(pelvis);
  tree.joints.push_back(FreeRoot(pelvis.name));

  constexpr double kSmallLinkRadius = 0.05;
  for (const bool left : {true, false}) {
    const std::string side = left ? "left" : "right";
    const double sign = left ? 1.0 : -1.0;
    const std::array<Vector3d, kLegJoints> axes = {
        Vector3d::UnitZ(), Vector3d::UnitX(), Vector3d::UnitY(),
        Vector3d::UnitY(), Vector3d::UnitY(), Vector3d::UnitX()};
    const std::array<Vector3d, kLegJoints> origins = {
        Vector3d(0.0, sign * 0.5 * r.hip_width, -r.hip_drop), Vector3d::Zero(),
        Vector3d::Zero(), Vector3d(0.0, 0.0, -r.thigh_length),
        Vector3d(0.0, 0.0, -r.shank_length), Vector3d::Zero()};
    const std::array<std::string, kLegJoints> body_names = {
        side + "_hip_yaw_link", side + "_hip_roll_link", side + "_thigh",
        side + "_shank", side + "_ankle_link", side + "_foot"};

    std::string parent(kPelvis);
    for (int j = 0; j < kLegJoints; ++j) {
      BodySpec body;
      body.name = body_names[j];
      switch (j) {
        case 2:
          body.mass = r.thigh_mass;
          body.com_offset = {0.0, 0.0, -0.5 * r.thigh_length};
          body.inertia = CylinderInertia(r.thigh_mass, r.limb_radius, r.thigh_length);
          break;
        case 3:
          body.mass = r.shank_mass;
          body.com_offset = {0.0, 0.0, -0.5 * r.shank_length};
          body.inertia = CylinderInertia(r.shank_mass, r.limb_radius, r.shank_length);
          break;
        case 5: {
          body.mass = r.foot_mass;
          const Vector3d extent(r.foot_length, r.foot_width, r.ankle_height);
          body.com_offset = {r.foot_forward, 0.0, -0.5 * r.ankle_height};
          body.inertia = BoxInertia(r.foot_mass, extent);
          Geom sole;
          sole.kind = GeomKind::kBox;
          sole.size = extent;
          sole.pos = body.com_offset;
          body.geometry.push_back(sole);
          break;
        }
        default: {
          const double mass = (j == 4) ? r.ankle_link_mass : r.hip_link_mass;
          body.mass = mass;
          body.inertia = SphereInertia(mass, kSmallLinkRadius);
        }
      }
      tree.bodies.push_back(body);

      JointSpec joint = Revolute(side + "_" + std::string(kLegJointNames[j]), parent,
                                 body.name, axes[j], origins[j]);
      joint.limits = left ? r.leg_limits[j] : RightLegLimits(r, j);
      joint.actuated = true;
      tree.joints.push_back(joint);
      parent = body.name;
    }
  }
  FinalizeDimensions(&tree);
  return tree;
}

absl::StatusOr<KinematicTree> BuildSkateboardTree(const ModelParams& params) {
  if (absl::Status status = ValidateParams(params); !status.ok()) return status;
  const SkateboardParams& s = params.skateboard;
  KinematicTree tree;

  BodySpec deck;
  deck.name = std::string(kDeck);
  deck.mass = s.deck_mass;
  const Vector3d deck_extent(s.deck_length, s.deck_width, s.deck_thickness);
  deck.inertia = BoxInertia(s.deck_mass, deck_extent);
  Geom top;
  top.kind = GeomKind::kBox;
  top.size = deck_extent;
  deck.geometry.push_back(top);
  tree.bodies.push_back(deck);
  tree.joints.push_back(FreeRoot(deck.name));

  const double c = std::cos(s.truck_rake);
  const double sn = std::sin(s.truck_rake);
  for (const bool front : {true, false}) {
    const double sign = front ? 1.0 : -1.0;
    BodySpec hanger;
    hanger.name = std::string(front ? kFrontHanger : kRearHanger);
    hanger.mass = s.hanger_mass;
    hanger.com_offset = {0.0, 0.0, -s.axle_drop};
    hanger.inertia = BoxInertia(
        s.hanger_mass, Vector3d(3.0 * s.wheel_radius, s.wheel_track + 2.0 * s.wheel_radius,
                                2.0 * s.wheel_radius));
    for (const double side : {1.0, -1.0}) {
      Geom wheel;
      wheel.kind = GeomKind::kSphere;
      wheel.size = Vector3d(s.wheel_radius, 0.0, 0.0);
      wheel.pos = {0.0, side * 0.5 * s.wheel_track, -s.axle_drop};
      hanger.geometry.push_back(wheel);
    }
    tree.bodies.push_back(hanger);

    // Pivot axes are mirrored front to rear, so a deck lean steers the two
    // trucks in opposite senses.
    JointSpec truck = Revolute(front ? "front_truck" : "rear_truck", deck.name, hanger.name,
                               Vector3d(sign * c, 0.0, sn),
                               Vector3d(sign * 0.5 * s.wheelbase, 0.0, -s.truck_height));
    truck.stiffness = s.truck_stiffness;
    truck.damping = s.truck_damping;
    tree.joints.push_back(truck);
  }
  FinalizeDimensions(&tree);
  return tree;
}

std::vector<std::string> ValidateTree(const KinematicTree& tree) {
  std::vector<std::string> out;
  std::map<std::string, int> body_index;
  for (int i = 0; i < static_cast<int>(tree.bodies.size()); ++i) {
    const BodySpec& b = tree.bodies[i];
    if (!body_index.emplace(b.name, i).second) {
      out.push_back(absl::StrCat("body ", b.name, ": duplicate name"));
    }
    if (!(b.mass > 0.0) || !std::isfinite(b.mass)) {
      out.push_back(absl::StrCat("body ", b.name, ": mass must be positive"));
    }
    if (!IsFiniteMatrix(b.inertia) || !b.com_offset.allFinite()) {
      out.push_back(absl::StrCat("body ", b.name, ": non-finite inertial data"));
    } else {
      const double scale = std::max(1.0, b.inertia.cwiseAbs().maxCoeff());
      if ((b.inertia - b.inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        out.push_back(absl::StrCat("body ", b.name, ": inertia not symmetric"));
      } else if (Eigen::LLT<Matrix3d>(b.inertia).info() != Eigen::Success) {
        out.push_back(absl::StrCat("body ", b.name, ": inertia not positive-definite"));
      }
    }
  }

  std::set<std::string> joint_names;
  std::map<std::string, int> parent_joint_of;  // child body -> joint index
  int roots = 0;
  int revolute = 0;
  for (int i = 0; i < static_cast<int>(tree.joints.size()); ++i) {
    const JointSpec& j = tree.joints[i];
    if (!joint_names.insert(j.name).second) {
      out.push_back(absl::StrCat("joint ", j.name, ": duplicate name"));
    }
    if (!body_index.count(j.child)) {
      out.push_back(absl::StrCat("joint ", j.name, ": unknown child body ", j.child));
    } else if (!parent_joint_of.emplace(j.child, i).second) {
      out.push_back(absl::StrCat("body ", j.child, ": attached by more than one joint"));
    }
    const bool to_world = j.parent == kWorld;
    if (!to_world && !body_index.count(j.parent)) {
      out.push_back(absl::StrCat("joint ", j.name, ": unknown parent body ", j.parent));
    }
    if (to_world) ++roots;
    if (j.kind == JointKind::kFree6) {
      if (!to_world) {
        out.push_back(absl::StrCat("joint ", j.name, ": free6 joint must attach to world"));
      }
      if (j.stiffness != 0.0 || j.actuated) {
        out.push_back(absl::StrCat("joint ", j.name,
                                   ": free6 joint must be unactuated with zero stiffness"));
      }
    } else {
      ++revolute;
      if (to_world) {
        out.push_back(absl::StrCat("joint ", j.name, ": root joint must be free6"));
      }
      if (!j.axis.allFinite() || std::abs(j.axis.norm() - 1.0) > 1e-9) {
        out.push_back(absl::StrCat("joint ", j.name, ": revolute axis is not unit-norm"));
      }
      if (j.limits && !(j.limits->lo < j.limits->hi)) {
        out.push_back(absl::StrCat("joint ", j.name, ": limits require lo < hi"));
      }
      if (!(j.stiffness >= 0.0) || !(j.damping >= 0.0)) {
        out.push_back(absl::StrCat("joint ", j.name, ": negative stiffness or damping"));
      }
    }
  }
  if (roots != 1) {
    out.push_back(absl::StrCat("expected exactly one root joint, found ", roots));
  }
  for (const auto& b : tree.bodies) {
    if (!parent_joint_of.count(b.name)) {
      out.push_back(absl::StrCat("body ", b.name, ": not attached by any joint"));
    }
  }

  // Walk parent links from every joint; a walk that returns to its start is a
  // cycle, reported once at its lowest-index joint.
  std::set<int> reported;
  for (int start = 0; start < static_cast<int>(tree.joints.size()); ++start) {
    std::vector<int> path;
    std::set<int> visited;
    int current = start;
    while (current >= 0 && visited.insert(current).second) {
      path.push_back(current);
      const std::string& parent = tree.joints[current].parent;
      auto it = parent_joint_of.find(parent);
      current = (parent == kWorld || it == parent_joint_of.end()) ? -1 : it->second;
    }
    if (current == start) {
      const int lowest = *std::min_element(path.begin(), path.end());
      if (reported.insert(lowest).second) {
        out.push_back(absl::StrCat("cycle at joint ", tree.joints[lowest].name));
      }
    }
  }

  if (tree.nq != 7 + revolute || tree.nv != 6 + revolute) {
    out.push_back(absl::StrCat("dimension mismatch: nq=", tree.nq, " nv=", tree.nv,
                               ", expected nq=", 7 + revolute, " nv=", 6 + revolute));
  }
  return out;
}

}  // namespace boardpush::model

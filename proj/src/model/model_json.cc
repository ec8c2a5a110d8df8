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

#include <array>
#include <string>

#include "boardpush/common/json_reader.h"
#include "boardpush/model/model.h"

namespace boardpush::model {
namespace {

using nlohmann::json;

json Vec(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

void ReadVec(JsonReader& reader, const std::string& key, Eigen::Vector3d* out) {
  std::array<double, 3> v = {out->x(), out->y(), out->z()};
  reader.Read(key, &v);
  *out = {v[0], v[1], v[2]};
}

}  // namespace

json ToJson(const ModelParams& params) {
  const RobotParams& r = params.robot;
  json limits = json::object();
  for (int j = 0; j < kLegJoints; ++j) {
    limits[std::string(kLegJointNames[j])] =
        json::array({r.leg_limits[j].lo, r.leg_limits[j].hi});
  }
  json torques = json::object();
  for (int j = 0; j < kLegJoints; ++j) {
    torques[std::string(kLegJointNames[j])] = r.torque_limits[j];
  }
  const SkateboardParams& s = params.skateboard;
  const FrictionParams& f = params.friction;
  return json{
      {"schema", kModelSchema},
      {"robot",
       {{"pelvis_mass", r.pelvis_mass},
        {"pelvis_com", Vec(r.pelvis_com)},
        {"pelvis_extent", Vec(r.pelvis_extent)},
        {"hip_width", r.hip_width},
        {"hip_drop", r.hip_drop},
        {"hip_link_mass", r.hip_link_mass},
        {"thigh_length", r.thigh_length},
        {"thigh_mass", r.thigh_mass},
        {"shank_length", r.shank_length},
        {"shank_mass", r.shank_mass},
        {"limb_radius", r.limb_radius},
        {"ankle_link_mass", r.ankle_link_mass},
        {"foot_mass", r.foot_mass},
        {"foot_length", r.foot_length},
        {"foot_width", r.foot_width},
        {"ankle_height", r.ankle_height},
        {"foot_forward", r.foot_forward},
        {"leg_limits", limits},
        {"torque_limits", torques}}},
      {"skateboard",
       {{"deck_mass", s.deck_mass},
        {"deck_length", s.deck_length},
        {"deck_width", s.deck_width},
        {"deck_thickness", s.deck_thickness},
        {"truck_rake", s.truck_rake},
        {"truck_stiffness", s.truck_stiffness},
        {"truck_damping", s.truck_damping},
        {"wheelbase", s.wheelbase},
        {"truck_height", s.truck_height},
        {"hanger_mass", s.hanger_mass},
        {"wheel_track", s.wheel_track},
        {"axle_drop", s.axle_drop},
        {"wheel_radius", s.wheel_radius}}},
      {"friction",
       {{"mu_ground_foot", f.mu_ground_foot},
        {"mu_deck_foot", f.mu_deck_foot},
        {"mu_wheel_lat", f.mu_wheel_lat},
        {"mu_wheel_roll", f.mu_wheel_roll}}},
  };
}

absl::StatusOr<ModelParams> ModelParamsFromJson(const json& object) {
  ModelParams params;
  JsonReader root(object, "");
  root.Ignore("schema");

  JsonReader robot = root.Child("robot");
  RobotParams& r = params.robot;
  robot.Read("pelvis_mass", &r.pelvis_mass);
  ReadVec(robot, "pelvis_com", &r.pelvis_com);
  ReadVec(robot, "pelvis_extent", &r.pelvis_extent);
  robot.Read("hip_width", &r.hip_width);
  robot.Read("hip_drop", &r.hip_drop);
  robot.Read("hip_link_mass", &r.hip_link_mass);
  robot.Read("thigh_length", &r.thigh_length);
  robot.Read("thigh_mass", &r.thigh_mass);
  robot.Read("shank_length", &r.shank_length);
  robot.Read("shank_mass", &r.shank_mass);
  robot.Read("limb_radius", &r.limb_radius);
  robot.Read("ankle_link_mass", &r.ankle_link_mass);
  robot.Read("foot_mass", &r.foot_mass);
  robot.Read("foot_length", &r.foot_length);
  robot.Read("foot_width", &r.foot_width);
  robot.Read("ankle_height", &r.ankle_height);
  robot.Read("foot_forward", &r.foot_forward);
  JsonReader limits = robot.Child("leg_limits");
  JsonReader torques = robot.Child("torque_limits");
  for (int j = 0; j < kLegJoints; ++j) {
    const std::string name(kLegJointNames[j]);
    std::array<double, 2> lim = {r.leg_limits[j].lo, r.leg_limits[j].hi};
    limits.Read(name, &lim);
    r.leg_limits[j] = {lim[0], lim[1]};
    torques.Read(name, &r.torque_limits[j]);
  }
  limits.CheckUnknown();
  torques.CheckUnknown();
  robot.CheckUnknown();

  JsonReader board = root.Child("skateboard");
  SkateboardParams& s = params.skateboard;
  board.Read("deck_mass", &s.deck_mass);
  board.Read("deck_length", &s.deck_length);
  board.Read("deck_width", &s.deck_width);
  board.Read("deck_thickness", &s.deck_thickness);
  board.Read("truck_rake", &s.truck_rake);
  board.Read("truck_stiffness", &s.truck_stiffness);
  board.Read("truck_damping", &s.truck_damping);
  board.Read("wheelbase", &s.wheelbase);
  board.Read("truck_height", &s.truck_height);
  board.Read("hanger_mass", &s.hanger_mass);
  board.Read("wheel_track", &s.wheel_track);
  board.Read("axle_drop", &s.axle_drop);
  board.Read("wheel_radius", &s.wheel_radius);
  board.CheckUnknown();

  JsonReader friction = root.Child("friction");
  FrictionParams& f = params.friction;
  friction.Read("mu_ground_foot", &f.mu_ground_foot);
  friction.Read("mu_deck_foot", &f.mu_deck_foot);
  friction.Read("mu_wheel_lat", &f.mu_wheel_lat);
  friction.Read("mu_wheel_roll", &f.mu_wheel_roll);
  friction.CheckUnknown();
  root.CheckUnknown();

  if (absl::Status status = root.Finish(); !status.ok()) return status;
  return params;
}

}  // namespace boardpush::model

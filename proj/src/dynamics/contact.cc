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

#include "boardpush/dynamics/contact.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace boardpush::dynamics {

using spatial::Vec3;

std::string_view ContactPairName(ContactPair pair) {
  switch (pair) {
    case ContactPair::kFootGround:
      return "foot_ground";
    case ContactPair::kFootDeck:
      return "foot_deck";
    case ContactPair::kWheelGround:
      return "wheel_ground";
  }
  return "unknown";
}

absl::Status ValidateMaterial(const ContactMaterial& material) {
  if (!(material.k_c > 0.0) || !std::isfinite(material.k_c)) {
    return absl::InvalidArgumentError(absl::StrCat("k_c must be > 0 (got ", material.k_c, ")"));
  }
  if (!(material.b_c >= 0.0) || !std::isfinite(material.b_c)) {
    return absl::InvalidArgumentError(absl::StrCat("b_c must be >= 0 (got ", material.b_c, ")"));
  }
  if (!(material.v_eps > 0.0) || !std::isfinite(material.v_eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("v_eps must be > 0 (got ", material.v_eps, ")"));
  }
  return absl::OkStatus();
}

Vec3 PointForce(const ActiveContact& c, const ContactMaterial& material, double depth,
                const Vec3& rel_velocity) {
  const double separating = rel_velocity.dot(c.normal);
  const double fn = std::max(0.0, material.k_c * depth - material.b_c * separating);
  Vec3 force = fn * c.normal;
  if (fn > 0.0) {
    for (int i = 0; i < 2; ++i) {
      const double slip = rel_velocity.dot(c.friction_frame[i]);
      force -= c.mu[i] * fn * std::tanh(slip / material.v_eps) * c.friction_frame[i];
    }
  }
  return force;
}

Wrench ContactForce(const ActiveContact& c, const ContactMaterial& material) {
  Wrench w;
  if (c.num_points == 0) {
    w.force = PointForce(c, material, c.penetration, c.rel_velocity);
    return w;
  }
  for (int i = 0; i < c.num_points; ++i) {
    const Vec3 f = PointForce(c, material, c.depths[i], c.velocities[i]);
    w.force += f;
    w.torque += (c.points[i] - c.point).cross(f);
  }
  return w;
}

double SteerAngle(double roll, double rake) {
  return std::atan(std::sin(rake) * std::tan(roll));
}

double TruckTorque(double angle, double rate, double stiffness, double damping) {
  return -stiffness * angle - damping * rate;
}

}  // namespace boardpush::dynamics

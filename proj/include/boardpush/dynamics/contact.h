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

// Compliant contact model and the kinematic truck steering law.

#ifndef BOARDPUSH_DYNAMICS_CONTACT_H_
#define BOARDPUSH_DYNAMICS_CONTACT_H_

#include <array>
#include <string_view>

#include "absl/status/status.h"
#include "boardpush/dynamics/spatial.h"

namespace boardpush::dynamics {

enum class ContactPair { kFootGround, kFootDeck, kWheelGround };

std::string_view ContactPairName(ContactPair pair);

struct ContactMaterial {
  double k_c = 1e4;     // normal stiffness, N/m (per contact point)
  double b_c = 100.0;   // normal damping, N*s/m (per contact point)
  double v_eps = 0.01;  // friction regularization velocity, m/s
};

absl::Status ValidateMaterial(const ContactMaterial& material);

inline constexpr int kMaxPatchPoints = 4;

// One penetrating pair. A foot sole touches with up to four corner points,
// which share the pair's normal and friction frame; the summary fields
// describe the patch as a whole (centroid, deepest penetration, centroid
// velocity). Velocities are of the first body relative to the second.
struct ActiveContact {
  ContactPair pair = ContactPair::kFootGround;
  spatial::Vec3 point = spatial::Vec3::Zero();
  spatial::Vec3 normal = spatial::Vec3::UnitZ();  // pushes the first body
  double penetration = 0.0;
  spatial::Vec3 rel_velocity = spatial::Vec3::Zero();
  std::array<spatial::Vec3, 2> friction_frame = {spatial::Vec3::UnitX(),
                                                 spatial::Vec3::UnitY()};
  std::array<double, 2> mu = {0.0, 0.0};

  // 0 = left foot, 1 = right foot; wheel number 0..3 (front left, front
  // right, rear left, rear right) for wheel contacts.
  int index = 0;
  int num_points = 0;  // 0 means the summary fields form a single point
  std::array<spatial::Vec3, kMaxPatchPoints> points;
  std::array<double, kMaxPatchPoints> depths = {};
  std::array<spatial::Vec3, kMaxPatchPoints> velocities;

  // Filled by the stepper from the force law at detection time.
  double normal_force = 0.0;
};

struct Wrench {
  spatial::Vec3 force = spatial::Vec3::Zero();
  spatial::Vec3 torque = spatial::Vec3::Zero();  // about the contact point
};

// Force on the first body at one contact point: normal
// max(0, k_c * pen - b_c * (rel_velocity . normal)), with the relative
// normal velocity positive when separating; friction
// -mu_i * F_n * tanh(v_ti / v_eps) along each tangent.
spatial::Vec3 PointForce(const ActiveContact& c, const ContactMaterial& material, double depth,
                         const spatial::Vec3& rel_velocity);

// Total world wrench on the first body, summed over the patch points.
Wrench ContactForce(const ActiveContact& c, const ContactMaterial& material);

// Wheel steer angle produced by deck roll phi for truck rake lambda; the
// front truck steers by +delta and the rear by -delta. Requires |phi| < pi/2.
double SteerAngle(double roll, double rake);

// Restoring torque of a truck spring.
double TruckTorque(double angle, double rate, double stiffness, double damping);

}  // namespace boardpush::dynamics

#endif  // BOARDPUSH_DYNAMICS_CONTACT_H_

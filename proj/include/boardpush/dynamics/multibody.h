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

// Index-based articulated body compiled from a KinematicTree, with the
// standard recursive algorithms on top of it.
//
// Coordinates: the free root has q = [p (3), quaternion w,x,y,z (4)] and
// v = [linear velocity of the root origin in world (3), angular velocity in
// the root body frame (3)]. Each revolute joint adds one q and one v entry.

#ifndef BOARDPUSH_DYNAMICS_MULTIBODY_H_
#define BOARDPUSH_DYNAMICS_MULTIBODY_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "boardpush/dynamics/spatial.h"
#include "boardpush/model/model.h"

namespace boardpush::dynamics {

inline constexpr int kMaxBodies = 16;
inline constexpr int kMaxDof = 32;

// Fixed-capacity dense types; no heap traffic in the stepping loop.
using VectorN = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDof, 1>;
using MatrixN = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDof, kMaxDof>;
using Jacobian3 = Eigen::Matrix<double, 3, Eigen::Dynamic, 0, 3, kMaxDof>;

class Multibody {
 public:
  struct Link {
    std::string name;        // body name
    std::string joint_name;
    int parent = -1;         // link index, -1 for world
    model::JointKind kind = model::JointKind::kRevolute;
    spatial::Vec3 axis = spatial::Vec3::UnitZ();
    spatial::Vec3 origin_pos = spatial::Vec3::Zero();
    spatial::Mat3 origin_rot = spatial::Mat3::Identity();
    double stiffness = 0.0;
    double damping = 0.0;
    bool actuated = false;
    std::optional<model::JointLimits> limits;
    int q_index = 0;
    int v_index = 0;
    double mass = 0.0;
    spatial::Vec3 com = spatial::Vec3::Zero();
    spatial::Mat3 com_inertia = spatial::Mat3::Zero();
    spatial::Mat6 inertia = spatial::Mat6::Zero();  // about the body origin
    std::vector<model::Geom> geometry;
  };

  // Fails on trees with validation diagnostics or more than kMaxBodies
  // bodies / kMaxDof velocities.
  static absl::StatusOr<Multibody> Compile(const model::KinematicTree& tree);

  int nq() const { return nq_; }
  int nv() const { return nv_; }
  int num_links() const { return static_cast<int>(links_.size()); }
  const Link& link(int i) const { return links_[i]; }
  double total_mass() const { return total_mass_; }
  // Link index by body name, or -1.
  int FindLink(std::string_view body_name) const;
  // Velocity indices of actuated joints, in tree order.
  const std::vector<int>& actuated_dofs() const { return actuated_dofs_; }

  // Identity root pose, zero joint angles.
  Eigen::VectorXd NeutralConfiguration() const;

 private:
  std::vector<Link> links_;
  std::vector<int> actuated_dofs_;
  int nq_ = 0;
  int nv_ = 0;
  double total_mass_ = 0.0;
};

// Per-configuration quantities shared by the algorithms below.
struct Kinematics {
  int num_links = 0;
  std::array<spatial::Transform, kMaxBodies> parent_xform;  // parent -> link
  std::array<spatial::Mat3, kMaxBodies> rot;  // link frame -> world
  std::array<spatial::Vec3, kMaxBodies> pos;  // link origin in world
  std::array<spatial::Vec6, kMaxBodies> vel;  // spatial velocity, link coords
  // Velocity-product acceleration of each link, link coordinates.
  std::array<spatial::Vec6, kMaxBodies> bias_acc;
  spatial::Mat6 root_subspace = spatial::Mat6::Zero();
};

// `v` may be empty, in which case velocities are zero.
void ComputeKinematics(const Multibody& body, const Eigen::Ref<const Eigen::VectorXd>& q,
                       const Eigen::Ref<const Eigen::VectorXd>& v, Kinematics* kin);

// Joint-space inertia matrix by the composite-rigid-body algorithm.
void MassMatrix(const Multibody& body, const Kinematics& kin, MatrixN* mass);

// Coriolis, centrifugal and gravity generalized forces, with the convention
// M * vdot = tau + f_ext - bias.
void BiasForces(const Multibody& body, const Kinematics& kin, const spatial::Vec3& gravity,
                VectorN* bias);

// Checked entry points on raw coordinates.
absl::StatusOr<Eigen::MatrixXd> MassMatrix(const Multibody& body, const Eigen::VectorXd& q);
absl::StatusOr<Eigen::VectorXd> BiasForces(const Multibody& body, const Eigen::VectorXd& q,
                                           const Eigen::VectorXd& v,
                                           const spatial::Vec3& gravity);
// Kinetic plus gravitational potential energy (potential zero at z = 0).
absl::StatusOr<double> Energy(const Multibody& body, const Eigen::VectorXd& q,
                              const Eigen::VectorXd& v, const spatial::Vec3& gravity);
// Generalized acceleration M^-1 (tau - bias).
absl::StatusOr<Eigen::VectorXd> ForwardDynamics(const Multibody& body, const Eigen::VectorXd& q,
                                                const Eigen::VectorXd& v,
                                                const Eigen::VectorXd& tau,
                                                const spatial::Vec3& gravity);

// World-frame linear velocity Jacobian of a point fixed to `link`, located at
// `point` (world). Columns beyond the link's ancestor chain are zero.
void PointJacobian(const Multibody& body, const Kinematics& kin, int link,
                   const spatial::Vec3& point, Jacobian3* jac);

// World angular velocity and world linear velocity of `point` on `link`.
spatial::Vec3 AngularVelocityWorld(const Kinematics& kin, int link);
spatial::Vec3 PointVelocityWorld(const Kinematics& kin, int link, const spatial::Vec3& point);
spatial::Vec3 ComWorld(const Multibody& body, const Kinematics& kin, int link);

struct MomentumSummary {
  double mass = 0.0;
  spatial::Vec3 com = spatial::Vec3::Zero();
  spatial::Vec3 linear = spatial::Vec3::Zero();   // world
  spatial::Vec3 angular = spatial::Vec3::Zero();  // about the world origin
  spatial::Mat3 com_inertia = spatial::Mat3::Zero();  // locked, about com, world
};
MomentumSummary Momentum(const Multibody& body, const Kinematics& kin);

// Advances q along v for duration h: root position by the world velocity,
// root orientation by the exponential of the body angular velocity, revolute
// angles linearly. The quaternion is re-normalized.
void Integrate(const Multibody& body, const Eigen::Ref<const Eigen::VectorXd>& q,
               const Eigen::Ref<const Eigen::VectorXd>& v, double h,
               Eigen::Ref<Eigen::VectorXd> q_out);

// Finite, correctly sized, unit root quaternion to 1e-9.
absl::Status CheckConfiguration(const Multibody& body, const Eigen::VectorXd& q);

}  // namespace boardpush::dynamics

#endif  // BOARDPUSH_DYNAMICS_MULTIBODY_H_

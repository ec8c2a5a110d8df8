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

#include "boardpush/dynamics/multibody.h"

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace boardpush::dynamics {
namespace {

using spatial::Mat3;
using spatial::Mat6;
using spatial::Transform;
using spatial::Vec3;
using spatial::Vec6;

using Subspace = Eigen::Matrix<double, 6, Eigen::Dynamic, 0, 6, 6>;

Mat3 AxisRotation(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

// Motion subspace of link i in link coordinates.
Subspace MotionSubspace(const Multibody& body, const Kinematics& kin, int i) {
  const Multibody::Link& link = body.link(i);
  if (link.kind == model::JointKind::kFree6) return kin.root_subspace;
  Subspace s(6, 1);
  s << link.axis, Vec3::Zero();
  return s;
}

int Dofs(const Multibody::Link& link) {
  return link.kind == model::JointKind::kFree6 ? 6 : 1;
}

}  // namespace

absl::StatusOr<Multibody> Multibody::Compile(const model::KinematicTree& tree) {
  const std::vector<std::string> diagnostics = model::ValidateTree(tree);
  if (!diagnostics.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid kinematic tree: ", absl::StrJoin(diagnostics, "; ")));
  }
  if (static_cast<int>(tree.bodies.size()) > kMaxBodies || tree.nv > kMaxDof) {
    return absl::InvalidArgumentError(absl::StrCat("kinematic tree too large: ",
                                                   tree.bodies.size(), " bodies, nv=", tree.nv));
  }

  Multibody out;
  std::map<std::string, int> link_of_body;
  std::vector<bool> placed(tree.joints.size(), false);
  // Parents before children, otherwise in declaration order.
  while (out.links_.size() < tree.joints.size()) {
    for (size_t j = 0; j < tree.joints.size(); ++j) {
      const model::JointSpec& joint = tree.joints[j];
      if (placed[j]) continue;
      const bool to_world = joint.parent == model::kWorld;
      if (!to_world && !link_of_body.count(joint.parent)) continue;
      placed[j] = true;
      const model::BodySpec& spec = *tree.FindBody(joint.child);
      Link link;
      link.name = spec.name;
      link.joint_name = joint.name;
      link.parent = to_world ? -1 : link_of_body.at(joint.parent);
      link.kind = joint.kind;
      link.axis = joint.axis;
      link.origin_pos = joint.origin_pos;
      link.origin_rot = joint.origin_rot;
      link.stiffness = joint.stiffness;
      link.damping = joint.damping;
      link.actuated = joint.actuated;
      link.limits = joint.limits;
      link.mass = spec.mass;
      link.com = spec.com_offset;
      link.com_inertia = spec.inertia;
      link.inertia = spatial::SpatialInertia(spec.mass, spec.com_offset, spec.inertia);
      link.geometry = spec.geometry;
      link_of_body[spec.name] = static_cast<int>(out.links_.size());
      out.links_.push_back(std::move(link));
    }
  }

  int q = 7;
  int v = 6;
  for (Link& link : out.links_) {
    out.total_mass_ += link.mass;
    if (link.kind == model::JointKind::kFree6) continue;
    link.q_index = q++;
    link.v_index = v++;
    if (link.actuated) out.actuated_dofs_.push_back(link.v_index);
  }
  out.nq_ = q;
  out.nv_ = v;
  return out;
}

int Multibody::FindLink(std::string_view body_name) const {
  for (int i = 0; i < num_links(); ++i) {
    if (links_[i].name == body_name) return i;
  }
  return -1;
}

Eigen::VectorXd Multibody::NeutralConfiguration() const {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(nq_);
  q[3] = 1.0;
  return q;
}

void ComputeKinematics(const Multibody& body, const Eigen::Ref<const Eigen::VectorXd>& q,
                       const Eigen::Ref<const Eigen::VectorXd>& v, Kinematics* kin) {
  const bool has_v = v.size() > 0;
  kin->num_links = body.num_links();
  for (int i = 0; i < body.num_links(); ++i) {
    const Multibody::Link& link = body.link(i);
    Transform& x = kin->parent_xform[i];
    if (link.kind == model::JointKind::kFree6) {
      const spatial::Quat quat(q[3], q[4], q[5], q[6]);
      const Mat3 r = quat.normalized().toRotationMatrix();
      kin->rot[i] = r;
      kin->pos[i] = q.segment<3>(0);
      x.rot = r.transpose();
      x.pos = kin->pos[i];
      Mat6& s = kin->root_subspace;
      s.setZero();
      s.block<3, 3>(0, 3).setIdentity();
      s.block<3, 3>(3, 0) = r.transpose();
      if (has_v) {
        const Vec3 omega = v.segment<3>(3);
        const Vec3 lin = r.transpose() * v.segment<3>(0);
        kin->vel[i] = spatial::Stack(omega, lin);
        kin->bias_acc[i] = spatial::Stack(Vec3::Zero(), -omega.cross(lin));
      } else {
        kin->vel[i].setZero();
        kin->bias_acc[i].setZero();
      }
      continue;
    }
    const Mat3 joint_rot = link.origin_rot * AxisRotation(link.axis, q[link.q_index]);
    x.rot = joint_rot.transpose();
    x.pos = link.origin_pos;
    const int p = link.parent;
    kin->rot[i] = kin->rot[p] * joint_rot;
    kin->pos[i] = kin->pos[p] + kin->rot[p] * link.origin_pos;
    if (has_v) {
      const Vec6 vj = spatial::Stack(link.axis * v[link.v_index], Vec3::Zero());
      kin->vel[i] = x.ApplyMotion(kin->vel[p]) + vj;
      kin->bias_acc[i] = spatial::CrossMotion(kin->vel[i], vj);
    } else {
      kin->vel[i].setZero();
      kin->bias_acc[i].setZero();
    }
  }
}

void MassMatrix(const Multibody& body, const Kinematics& kin, MatrixN* mass) {
  const int n = body.num_links();
  mass->setZero(body.nv(), body.nv());
  std::array<Mat6, kMaxBodies> composite;
  for (int i = 0; i < n; ++i) composite[i] = body.link(i).inertia;
  for (int i = n - 1; i >= 0; --i) {
    const int p = body.link(i).parent;
    if (p < 0) continue;
    const Mat6 x = kin.parent_xform[i].MotionMatrix();
    composite[p] += x.transpose() * composite[i] * x;
  }
  for (int i = 0; i < n; ++i) {
    const Multibody::Link& link = body.link(i);
    const Subspace s = MotionSubspace(body, kin, i);
    const int di = Dofs(link);
    Subspace f = composite[i] * s;
    mass->block(link.v_index, link.v_index, di, di) = s.transpose() * f;
    int j = i;
    while (body.link(j).parent >= 0) {
      f = kin.parent_xform[j].MotionMatrix().transpose() * f;
      j = body.link(j).parent;
      const Multibody::Link& lj = body.link(j);
      const Subspace sj = MotionSubspace(body, kin, j);
      const int dj = Dofs(lj);
      mass->block(lj.v_index, link.v_index, dj, di) = sj.transpose() * f;
      mass->block(link.v_index, lj.v_index, di, dj) =
          mass->block(lj.v_index, link.v_index, dj, di).transpose();
    }
  }
}

void BiasForces(const Multibody& body, const Kinematics& kin, const Vec3& gravity,
                VectorN* bias) {
  const int n = body.num_links();
  bias->setZero(body.nv());
  std::array<Vec6, kMaxBodies> acc;
  std::array<Vec6, kMaxBodies> force;
  const Vec6 base_acc = spatial::Stack(Vec3::Zero(), -gravity);
  for (int i = 0; i < n; ++i) {
    const Multibody::Link& link = body.link(i);
    const Vec6& parent_acc = link.parent < 0 ? base_acc : acc[link.parent];
    acc[i] = kin.parent_xform[i].ApplyMotion(parent_acc) + kin.bias_acc[i];
    force[i] = link.inertia * acc[i] +
               spatial::CrossForce(kin.vel[i], link.inertia * kin.vel[i]);
  }
  for (int i = n - 1; i >= 0; --i) {
    const Multibody::Link& link = body.link(i);
    const Subspace s = MotionSubspace(body, kin, i);
    bias->segment(link.v_index, Dofs(link)) = s.transpose() * force[i];
    if (link.parent >= 0) force[link.parent] += kin.parent_xform[i].InverseForce(force[i]);
  }
}

absl::Status CheckConfiguration(const Multibody& body, const Eigen::VectorXd& q) {
  if (q.size() != body.nq()) {
    return absl::InvalidArgumentError(
        absl::StrCat("configuration has size ", q.size(), ", expected ", body.nq()));
  }
  if (!q.allFinite()) return absl::InvalidArgumentError("configuration is not finite");
  const double norm = q.segment<4>(3).norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("root quaternion is not unit-norm (|q| = ", norm, ")"));
  }
  return absl::OkStatus();
}

namespace {

absl::Status CheckVelocity(const Multibody& body, const Eigen::VectorXd& v) {
  if (v.size() != body.nv()) {
    return absl::InvalidArgumentError(
        absl::StrCat("velocity has size ", v.size(), ", expected ", body.nv()));
  }
  if (!v.allFinite()) return absl::InvalidArgumentError("velocity is not finite");
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Eigen::MatrixXd> MassMatrix(const Multibody& body, const Eigen::VectorXd& q) {
  if (absl::Status s = CheckConfiguration(body, q); !s.ok()) return s;
  Kinematics kin;
  ComputeKinematics(body, q, Eigen::VectorXd(), &kin);
  MatrixN m;
  MassMatrix(body, kin, &m);
  return Eigen::MatrixXd(m);
}

absl::StatusOr<Eigen::VectorXd> BiasForces(const Multibody& body, const Eigen::VectorXd& q,
                                           const Eigen::VectorXd& v, const Vec3& gravity) {
  if (absl::Status s = CheckConfiguration(body, q); !s.ok()) return s;
  if (absl::Status s = CheckVelocity(body, v); !s.ok()) return s;
  Kinematics kin;
  ComputeKinematics(body, q, v, &kin);
  VectorN c;
  BiasForces(body, kin, gravity, &c);
  return Eigen::VectorXd(c);
}

absl::StatusOr<double> Energy(const Multibody& body, const Eigen::VectorXd& q,
                              const Eigen::VectorXd& v, const Vec3& gravity) {
  if (absl::Status s = CheckConfiguration(body, q); !s.ok()) return s;
  if (absl::Status s = CheckVelocity(body, v); !s.ok()) return s;
  Kinematics kin;
  ComputeKinematics(body, q, v, &kin);
  double energy = 0.0;
  for (int i = 0; i < body.num_links(); ++i) {
    const Multibody::Link& link = body.link(i);
    energy += 0.5 * kin.vel[i].dot(link.inertia * kin.vel[i]);
    energy -= link.mass * gravity.dot(ComWorld(body, kin, i));
  }
  return energy;
}

absl::StatusOr<Eigen::VectorXd> ForwardDynamics(const Multibody& body, const Eigen::VectorXd& q,
                                                const Eigen::VectorXd& v,
                                                const Eigen::VectorXd& tau,
                                                const Vec3& gravity) {
  if (absl::Status s = CheckConfiguration(body, q); !s.ok()) return s;
  if (absl::Status s = CheckVelocity(body, v); !s.ok()) return s;
  if (tau.size() != body.nv()) {
    return absl::InvalidArgumentError(
        absl::StrCat("force vector has size ", tau.size(), ", expected ", body.nv()));
  }
  Kinematics kin;
  ComputeKinematics(body, q, v, &kin);
  MatrixN m;
  VectorN c;
  MassMatrix(body, kin, &m);
  BiasForces(body, kin, gravity, &c);
  const VectorN rhs = tau - c;
  return Eigen::VectorXd(m.llt().solve(rhs));
}

void PointJacobian(const Multibody& body, const Kinematics& kin, int link, const Vec3& point,
                   Jacobian3* jac) {
  jac->setZero(3, body.nv());
  for (int j = link; j >= 0; j = body.link(j).parent) {
    const Multibody::Link& l = body.link(j);
    const Vec3 arm = point - kin.pos[j];
    if (l.kind == model::JointKind::kFree6) {
      jac->block<3, 3>(0, 0).setIdentity();
      jac->block<3, 3>(0, 3) = -spatial::Skew(arm) * kin.rot[j];
    } else {
      jac->col(l.v_index) = (kin.rot[j] * l.axis).cross(arm);
    }
  }
}

Vec3 AngularVelocityWorld(const Kinematics& kin, int link) {
  return kin.rot[link] * spatial::Angular(kin.vel[link]);
}

Vec3 PointVelocityWorld(const Kinematics& kin, int link, const Vec3& point) {
  const Vec3 omega = AngularVelocityWorld(kin, link);
  const Vec3 origin_vel = kin.rot[link] * spatial::Linear(kin.vel[link]);
  return origin_vel + omega.cross(point - kin.pos[link]);
}

Vec3 ComWorld(const Multibody& body, const Kinematics& kin, int link) {
  return kin.pos[link] + kin.rot[link] * body.link(link).com;
}

MomentumSummary Momentum(const Multibody& body, const Kinematics& kin) {
  MomentumSummary out;
  Vec3 weighted = Vec3::Zero();
  for (int i = 0; i < body.num_links(); ++i) {
    const Multibody::Link& link = body.link(i);
    const Vec3 c = ComWorld(body, kin, i);
    const Vec3 vc = PointVelocityWorld(kin, i, c);
    const Mat3 inertia = kin.rot[i] * link.com_inertia * kin.rot[i].transpose();
    out.mass += link.mass;
    weighted += link.mass * c;
    out.linear += link.mass * vc;
    out.angular += link.mass * c.cross(vc) + inertia * AngularVelocityWorld(kin, i);
  }
  out.com = weighted / out.mass;
  for (int i = 0; i < body.num_links(); ++i) {
    const Multibody::Link& link = body.link(i);
    const Vec3 d = ComWorld(body, kin, i) - out.com;
    out.com_inertia += kin.rot[i] * link.com_inertia * kin.rot[i].transpose() +
                       link.mass * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
  }
  return out;
}

void Integrate(const Multibody& body, const Eigen::Ref<const Eigen::VectorXd>& q,
               const Eigen::Ref<const Eigen::VectorXd>& v, double h,
               Eigen::Ref<Eigen::VectorXd> q_out) {
  q_out = q;
  q_out.segment<3>(0) += h * v.segment<3>(0);
  const spatial::Quat quat(q[3], q[4], q[5], q[6]);
  const spatial::Quat next = (quat * spatial::QuatExp(h * v.segment<3>(3))).normalized();
  q_out[3] = next.w();
  q_out[4] = next.x();
  q_out[5] = next.y();
  q_out[6] = next.z();
  for (int i = 0; i < body.num_links(); ++i) {
    const Multibody::Link& link = body.link(i);
    if (link.kind == model::JointKind::kRevolute) {
      q_out[link.q_index] += h * v[link.v_index];
    }
  }
}

}  // namespace boardpush::dynamics

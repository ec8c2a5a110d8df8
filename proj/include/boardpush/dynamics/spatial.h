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

// Plücker spatial algebra. Spatial vectors are ordered [angular; linear].

#ifndef BOARDPUSH_DYNAMICS_SPATIAL_H_
#define BOARDPUSH_DYNAMICS_SPATIAL_H_

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace boardpush::spatial {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Quat = Eigen::Quaterniond;

inline Mat3 Skew(const Vec3& v) {
  Mat3 s;
  s << 0, -v.z(), v.y(),
       v.z(), 0, -v.x(),
       -v.y(), v.x(), 0;
  return s;
}

inline Vec3 Angular(const Vec6& v) { return v.head<3>(); }
inline Vec3 Linear(const Vec6& v) { return v.tail<3>(); }

inline Vec6 Stack(const Vec3& angular, const Vec3& linear) {
  Vec6 out;
  out << angular, linear;
  return out;
}

// Motion cross product v x m.
inline Vec6 CrossMotion(const Vec6& v, const Vec6& m) {
  const Vec3 w = Angular(v);
  return Stack(w.cross(Angular(m)), w.cross(Linear(m)) + Linear(v).cross(Angular(m)));
}

// Force cross product v x* f.
inline Vec6 CrossForce(const Vec6& v, const Vec6& f) {
  const Vec3 w = Angular(v);
  return Stack(w.cross(Angular(f)) + Linear(v).cross(Linear(f)), w.cross(Linear(f)));
}

// Coordinate transform from frame A to frame B. `rot` maps A coordinates to
// B coordinates; `pos` is the origin of B expressed in A.
struct Transform {
  Mat3 rot = Mat3::Identity();
  Vec3 pos = Vec3::Zero();

  Vec6 ApplyMotion(const Vec6& m) const {
    const Vec3 w = Angular(m);
    return Stack(rot * w, rot * (Linear(m) - pos.cross(w)));
  }
  // Inverse of ApplyMotion: B coordinates back to A.
  Vec6 InverseMotion(const Vec6& m) const {
    const Vec3 w = rot.transpose() * Angular(m);
    return Stack(w, rot.transpose() * Linear(m) + pos.cross(w));
  }
  Vec6 ApplyForce(const Vec6& f) const {
    const Vec3 n = Angular(f);
    const Vec3 lin = Linear(f);
    return Stack(rot * (n - pos.cross(lin)), rot * lin);
  }
  // Transpose action on forces: B coordinates back to A.
  Vec6 InverseForce(const Vec6& f) const {
    const Vec3 lin = rot.transpose() * Linear(f);
    return Stack(rot.transpose() * Angular(f) + pos.cross(lin), lin);
  }
  // 6x6 motion transform matrix.
  Mat6 MotionMatrix() const {
    Mat6 x = Mat6::Zero();
    x.topLeftCorner<3, 3>() = rot;
    x.bottomRightCorner<3, 3>() = rot;
    x.bottomLeftCorner<3, 3>() = -rot * Skew(pos);
    return x;
  }
};

// (b_from_c) * (c_from_a): result maps A to C.
inline Transform Compose(const Transform& c_from_b, const Transform& b_from_a) {
  Transform out;
  out.rot = c_from_b.rot * b_from_a.rot;
  out.pos = b_from_a.pos + b_from_a.rot.transpose() * c_from_b.pos;
  return out;
}

// Spatial inertia about the body frame origin, from mass, center of mass and
// rotational inertia about the center of mass (all in body coordinates).
inline Mat6 SpatialInertia(double mass, const Vec3& com, const Mat3& com_inertia) {
  const Mat3 c = Skew(com);
  Mat6 inertia;
  inertia.topLeftCorner<3, 3>() = com_inertia + mass * c * c.transpose();
  inertia.topRightCorner<3, 3>() = mass * c;
  inertia.bottomLeftCorner<3, 3>() = mass * c.transpose();
  inertia.bottomRightCorner<3, 3>() = mass * Mat3::Identity();
  return inertia;
}

// Rotation exp map of a rotation vector.
inline Quat QuatExp(const Vec3& rotation_vector) {
  const double angle = rotation_vector.norm();
  if (angle < 1e-12) {
    return Quat(1.0, 0.5 * rotation_vector.x(), 0.5 * rotation_vector.y(),
                0.5 * rotation_vector.z()).normalized();
  }
  return Quat(Eigen::AngleAxisd(angle, rotation_vector / angle));
}

// Rotation vector of R (inverse of the exp map), valid for angles < pi.
inline Vec3 RotationLog(const Mat3& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.angle() * aa.axis();
}

}  // namespace boardpush::spatial

#endif  // BOARDPUSH_DYNAMICS_SPATIAL_H_

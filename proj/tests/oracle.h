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

// Reference evaluators used only by tests. Everything here is written
// directly from the textbook formulas against the raw KinematicTree, without
// the spatial-algebra code paths of the library.

#ifndef BOARDPUSH_TESTS_ORACLE_H_
#define BOARDPUSH_TESTS_ORACLE_H_

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "boardpush/model/model.h"

namespace boardpush::oracle {

// Lagrangian of a tree in a local exponential chart around a reference root
// orientation R0: x = [p (3), theta (3), joint angles], root orientation
// R0 * exp(theta). At theta = 0 the chart velocities coincide with the
// library's generalized velocities, and so do the equations of motion.
class ChartLagrangian {
 public:
  ChartLagrangian(const model::KinematicTree& tree, const Eigen::Matrix3d& r0)
      : tree_(tree), r0_(r0) {
    n_ = 6;
    for (const auto& j : tree_.joints) {
      if (j.kind == model::JointKind::kRevolute) ++n_;
    }
  }

  int size() const { return n_; }

  // Chart coordinates of a library configuration (theta = 0).
  static Eigen::VectorXd FromLibrary(const Eigen::VectorXd& q) {
    Eigen::VectorXd x(q.size() - 1);
    x.head<3>() = q.head<3>();
    x.segment<3>(3).setZero();
    x.tail(q.size() - 7) = q.tail(q.size() - 7);
    return x;
  }
  static Eigen::Matrix3d RootRotation(const Eigen::VectorXd& q) {
    return Eigen::Quaterniond(q[3], q[4], q[5], q[6]).normalized().toRotationMatrix();
  }

  double Kinetic(const Eigen::VectorXd& x, const Eigen::VectorXd& xd) const {
    double t = 0.0;
    Walk(x, xd, [&](const model::BodySpec& b, const Eigen::Matrix3d& r, const Eigen::Vector3d&,
                    const Eigen::Vector3d& w, const Eigen::Vector3d& v_origin) {
      const Eigen::Vector3d vc = v_origin + w.cross(r * b.com_offset);
      t += 0.5 * b.mass * vc.squaredNorm() + 0.5 * w.dot(r * b.inertia * r.transpose() * w);
    });
    return t;
  }

  double Potential(const Eigen::VectorXd& x, const Eigen::Vector3d& gravity) const {
    double u = 0.0;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n_);
    Walk(x, zero, [&](const model::BodySpec& b, const Eigen::Matrix3d& r,
                      const Eigen::Vector3d& p, const Eigen::Vector3d&, const Eigen::Vector3d&) {
      u -= b.mass * gravity.dot(p + r * b.com_offset);
    });
    return u;
  }

  // Generalized momentum dT/dxd; exact up to rounding since T is quadratic.
  Eigen::VectorXd Momentum(const Eigen::VectorXd& x, const Eigen::VectorXd& xd) const {
    Eigen::VectorXd p(n_);
    for (int i = 0; i < n_; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
      e[i] = 1.0;
      p[i] = Kinetic(x, xd + e) - Kinetic(x, xd) - Kinetic(x, e);
    }
    return p;
  }

  // Mass matrix by polarization of the kinetic energy.
  Eigen::MatrixXd Mass(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        Eigen::VectorXd ei = Eigen::VectorXd::Zero(n_);
        Eigen::VectorXd ej = Eigen::VectorXd::Zero(n_);
        ei[i] = 1.0;
        ej[j] = 1.0;
        m(i, j) = Kinetic(x, ei + ej) - Kinetic(x, ei) - Kinetic(x, ej);
      }
    }
    return m;
  }

  // Velocity-dependent and gravity terms of the Euler-Lagrange equations,
  // (d/dx dT/dxd) xd - dT/dx + dU/dx, by central differences.
  Eigen::VectorXd Bias(const Eigen::VectorXd& x, const Eigen::VectorXd& xd,
                       const Eigen::Vector3d& gravity, double eps = 1e-5) const {
    const Eigen::VectorXd dp =
        (Momentum(x + eps * xd, xd) - Momentum(x - eps * xd, xd)) / (2.0 * eps);
    Eigen::VectorXd out = dp;
    for (int i = 0; i < n_; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
      e[i] = eps;
      out[i] -= (Kinetic(x + e, xd) - Kinetic(x - e, xd)) / (2.0 * eps);
      out[i] += (Potential(x + e, gravity) - Potential(x - e, gravity)) / (2.0 * eps);
    }
    return out;
  }

  // World rotation and origin of a named body at chart coordinates x.
  std::pair<Eigen::Matrix3d, Eigen::Vector3d> BodyPose(const Eigen::VectorXd& x,
                                                       const std::string& name) const {
    std::pair<Eigen::Matrix3d, Eigen::Vector3d> pose;
    Walk(x, Eigen::VectorXd::Zero(n_),
         [&](const model::BodySpec& b, const Eigen::Matrix3d& r, const Eigen::Vector3d& p,
             const Eigen::Vector3d&, const Eigen::Vector3d&) {
           if (b.name == name) pose = {r, p};
         });
    return pose;
  }

 private:
  static Eigen::Matrix3d Hat(const Eigen::Vector3d& v) {
    Eigen::Matrix3d s;
    s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return s;
  }

  // Right Jacobian of SO(3): body angular velocity = J(theta) * theta_dot.
  static Eigen::Matrix3d RightJacobian(const Eigen::Vector3d& theta) {
    const double a = theta.norm();
    double c1;
    double c2;
    if (a < 1e-3) {
      c1 = 0.5 - a * a / 24.0;
      c2 = 1.0 / 6.0 - a * a / 120.0;
    } else {
      c1 = (1.0 - std::cos(a)) / (a * a);
      c2 = (a - std::sin(a)) / (a * a * a);
    }
    const Eigen::Matrix3d h = Hat(theta);
    return Eigen::Matrix3d::Identity() - c1 * h + c2 * h * h;
  }

  // Visits bodies with world rotation, origin, angular velocity and origin
  // velocity.
  template <typename Fn>
  void Walk(const Eigen::VectorXd& x, const Eigen::VectorXd& xd, Fn&& fn) const {
    struct Frame {
      Eigen::Matrix3d r;
      Eigen::Vector3d p;
      Eigen::Vector3d w;
      Eigen::Vector3d v;
    };
    std::map<std::string, Frame> frames;
    int k = 6;
    // Joints are listed parents first by the builders.
    for (const auto& j : tree_.joints) {
      const model::BodySpec& body = *tree_.FindBody(j.child);
      Frame f;
      if (j.kind == model::JointKind::kFree6) {
        const Eigen::Vector3d theta = x.segment<3>(3);
        const double a = theta.norm();
        const Eigen::Matrix3d exp_theta =
            a > 0.0 ? Eigen::AngleAxisd(a, theta / a).toRotationMatrix()
                    : Eigen::Matrix3d::Identity().eval();
        f.r = r0_ * exp_theta;
        f.p = x.head<3>();
        f.w = f.r * RightJacobian(theta) * xd.segment<3>(3);
        f.v = xd.head<3>();
      } else {
        const Frame& parent = frames.at(j.parent);
        const double angle = x[k];
        const double rate = xd[k];
        ++k;
        f.r = parent.r * j.origin_rot * Eigen::AngleAxisd(angle, j.axis).toRotationMatrix();
        f.p = parent.p + parent.r * j.origin_pos;
        f.w = parent.w + f.r * j.axis * rate;
        f.v = parent.v + parent.w.cross(f.p - parent.p);
      }
      fn(body, f.r, f.p, f.w, f.v);
      frames[body.name] = f;
    }
  }

  const model::KinematicTree& tree_;
  Eigen::Matrix3d r0_;
  int n_;
};

// Reward formulas evaluated straight from their definitions.
inline double DeckLinearTracking(double cmd_x, double cmd_y, double deck_x, double deck_y,
                                 double sigma) {
  const double ex = cmd_x - deck_x;
  const double ey = cmd_y - deck_y;
  return std::exp(-(ex * ex + ey * ey) / sigma);
}
inline double DeckAngularTracking(double cmd_wz, double deck_wz, double sigma) {
  return std::exp(-(cmd_wz - deck_wz) * (cmd_wz - deck_wz) / sigma);
}
inline double FootWorldSpeedSquared(double vx, double vy, double vz) {
  return vx * vx + vy * vy + vz * vz;
}
inline double DifferenceSquared(double ax, double ay, double bx, double by) {
  return (ax - bx) * (ax - bx) + (ay - by) * (ay - by);
}

// Advantages of one environment as explicit sums of discounted TD errors,
// A_t = sum_k (gamma lambda)^k delta_{t+k}, truncated at the first done.
inline std::vector<double> BruteForceAdvantages(const std::vector<double>& reward,
                                                const std::vector<double>& value,
                                                const std::vector<bool>& done, double bootstrap,
                                                double gamma, double lambda) {
  const int n = static_cast<int>(reward.size());
  std::vector<double> out(n, 0.0);
  for (int t = 0; t < n; ++t) {
    double weight = 1.0;
    for (int k = t; k < n; ++k) {
      const double next = k + 1 < n ? value[k + 1] : bootstrap;
      const double delta = reward[k] + (done[k] ? 0.0 : gamma * next) - value[k];
      out[t] += weight * delta;
      if (done[k]) break;
      weight *= gamma * lambda;
    }
  }
  return out;
}

// Discounted reward-to-go plus the discounted bootstrap, without any
// episode boundary.
inline double DiscountedReturn(const std::vector<double>& reward, int from, double bootstrap,
                               double gamma) {
  double sum = 0.0;
  double weight = 1.0;
  for (size_t k = from; k < reward.size(); ++k) {
    sum += weight * reward[k];
    weight *= gamma;
  }
  return sum + weight * bootstrap;
}

}  // namespace boardpush::oracle

#endif  // BOARDPUSH_TESTS_ORACLE_H_

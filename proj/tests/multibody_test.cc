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
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "oracle.h"

namespace boardpush::dynamics {
namespace {

const Eigen::Vector3d kGravity(0.0, 0.0, -9.81);

struct Fixture {
  model::KinematicTree tree;
  Multibody body;
};

Fixture Make(bool robot) {
  const model::ModelParams params;
  model::KinematicTree tree = *(robot ? model::BuildRobotTree(params)
                                      : model::BuildSkateboardTree(params));
  Multibody body = *Multibody::Compile(tree);
  return {tree, body};
}

Eigen::VectorXd RandomQ(const Multibody& body, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd q(body.nq());
  for (int i = 0; i < body.nq(); ++i) q[i] = u(rng);
  q.segment<4>(3).normalize();
  return q;
}

Eigen::VectorXd RandomV(const Multibody& body, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(body.nv());
  for (int i = 0; i < body.nv(); ++i) v[i] = u(rng);
  return v;
}

class MultibodyTest : public ::testing::TestWithParam<bool> {};

TEST_P(MultibodyTest, MassMatrixSymmetricPositiveDefinite) {
  const Fixture f = Make(GetParam());
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd m = *MassMatrix(f.body, RandomQ(f.body, rng));
    EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  }
}

TEST_P(MultibodyTest, ImpulseResponseMatchesMomentumOracle) {
  const Fixture f = Make(GetParam());
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd q = RandomQ(f.body, rng);
    const oracle::ChartLagrangian lagrangian(f.tree, oracle::ChartLagrangian::RootRotation(q));
    const Eigen::VectorXd x = oracle::ChartLagrangian::FromLibrary(q);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(f.body.nv());
    for (int j = 0; j < f.body.nv(); ++j) {
      // A unit generalized impulse over one short interval from rest.
      const double h = 1e-3;
      Eigen::VectorXd tau = zero;
      tau[j] = 1.0 / h;
      const Eigen::VectorXd dv =
          h * *ForwardDynamics(f.body, q, zero, tau, Eigen::Vector3d::Zero());
      const Eigen::VectorXd p = lagrangian.Momentum(x, dv);
      Eigen::VectorXd expected = zero;
      expected[j] = 1.0;
      EXPECT_LT((p - expected).cwiseAbs().maxCoeff(), 1e-6) << "column " << j;
    }
  }
}

TEST_P(MultibodyTest, MassMatrixMatchesKineticEnergyPolarization) {
  const Fixture f = Make(GetParam());
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd q = RandomQ(f.body, rng);
    const oracle::ChartLagrangian lagrangian(f.tree, oracle::ChartLagrangian::RootRotation(q));
    const Eigen::MatrixXd expected = lagrangian.Mass(oracle::ChartLagrangian::FromLibrary(q));
    const Eigen::MatrixXd m = *MassMatrix(f.body, q);
    EXPECT_LT((m - expected).cwiseAbs().maxCoeff(), 1e-9 * (1.0 + expected.norm()));
  }
}

TEST_P(MultibodyTest, BiasMatchesLagrangianOracle) {
  const Fixture f = Make(GetParam());
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd q = RandomQ(f.body, rng);
    const Eigen::VectorXd v = RandomV(f.body, rng);
    const oracle::ChartLagrangian lagrangian(f.tree, oracle::ChartLagrangian::RootRotation(q));
    const Eigen::VectorXd expected =
        lagrangian.Bias(oracle::ChartLagrangian::FromLibrary(q), v, kGravity);
    const Eigen::VectorXd c = *BiasForces(f.body, q, v, kGravity);
    const double scale = 1.0 + expected.cwiseAbs().maxCoeff();
    EXPECT_LT((c - expected).cwiseAbs().maxCoeff(), 1e-5 * scale);
  }
}

TEST_P(MultibodyTest, BiasVanishesAtRestWithoutGravity) {
  const Fixture f = Make(GetParam());
  std::mt19937_64 rng(19);
  const Eigen::VectorXd q = RandomQ(f.body, rng);
  const Eigen::VectorXd c =
      *BiasForces(f.body, q, Eigen::VectorXd::Zero(f.body.nv()), Eigen::Vector3d::Zero());
  EXPECT_EQ(c.cwiseAbs().maxCoeff(), 0.0);
}

TEST_P(MultibodyTest, EnergyMatchesOracle) {
  const Fixture f = Make(GetParam());
  std::mt19937_64 rng(23);
  const Eigen::VectorXd q = RandomQ(f.body, rng);
  const Eigen::VectorXd v = RandomV(f.body, rng);
  const oracle::ChartLagrangian lagrangian(f.tree, oracle::ChartLagrangian::RootRotation(q));
  const Eigen::VectorXd x = oracle::ChartLagrangian::FromLibrary(q);
  const double expected = lagrangian.Kinetic(x, v) + lagrangian.Potential(x, kGravity);
  EXPECT_NEAR(*Energy(f.body, q, v, kGravity), expected, 1e-10 * (1.0 + std::abs(expected)));
}

INSTANTIATE_TEST_SUITE_P(Trees, MultibodyTest, ::testing::Values(false, true),
                         [](const auto& info) { return info.param ? "Robot" : "Skateboard"; });

TEST(SkateboardDynamicsTest, TranslationalBlockIsTotalMass) {
  const Fixture f = Make(false);
  const Eigen::MatrixXd m = *MassMatrix(f.body, f.body.NeutralConfiguration());
  const double total = f.tree.TotalMass();
  EXPECT_LT((m.topLeftCorner<3, 3>() - total * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(SkateboardDynamicsTest, StaticBiasCarriesWeight) {
  const Fixture f = Make(false);
  const Eigen::VectorXd c = *BiasForces(f.body, f.body.NeutralConfiguration(),
                                        Eigen::VectorXd::Zero(f.body.nv()), kGravity);
  EXPECT_NEAR(c[2], f.tree.TotalMass() * 9.81, 1e-10);
}

TEST(SkateboardDynamicsTest, AtRestAtDatumEnergyIsZero) {
  const Fixture f = Make(false);
  // Neutral pose has the deck origin at z = 0, but the hangers hang below it;
  // with gravity off only kinetic energy remains.
  EXPECT_EQ(*Energy(f.body, f.body.NeutralConfiguration(), Eigen::VectorXd::Zero(f.body.nv()),
                    Eigen::Vector3d::Zero()),
            0.0);
}

TEST(SkateboardDynamicsTest, PureRotationEnergyMatchesRigidBodyFormula) {
  const Fixture f = Make(false);
  // Lock the trucks by giving them zero rate; the whole board spins as one
  // rigid body about the deck origin.
  const Eigen::Vector3d omega(0.3, -1.2, 0.7);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(f.body.nv());
  v.segment<3>(3) = omega;
  const Eigen::VectorXd q = f.body.NeutralConfiguration();
  // Rigid-body inertia about the deck origin, composed by parallel axes.
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();
  Kinematics kin;
  ComputeKinematics(f.body, q, Eigen::VectorXd(), &kin);
  for (int i = 0; i < f.body.num_links(); ++i) {
    const auto& link = f.body.link(i);
    const Eigen::Vector3d c = ComWorld(f.body, kin, i);
    inertia += kin.rot[i] * link.com_inertia * kin.rot[i].transpose() +
               link.mass * (c.squaredNorm() * Eigen::Matrix3d::Identity() - c * c.transpose());
  }
  const double expected = 0.5 * omega.dot(inertia * omega);
  EXPECT_NEAR(*Energy(f.body, q, v, Eigen::Vector3d::Zero()), expected, 1e-9);
}

TEST(MultibodyCheckTest, RejectsNonFiniteAndNonUnitConfigurations) {
  const Fixture f = Make(false);
  Eigen::VectorXd q = f.body.NeutralConfiguration();
  q[0] = std::nan("");
  EXPECT_FALSE(MassMatrix(f.body, q).ok());
  q = f.body.NeutralConfiguration();
  q[3] = 1.1;
  EXPECT_FALSE(MassMatrix(f.body, q).ok());
  q = f.body.NeutralConfiguration();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(f.body.nv());
  v[7] = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(BiasForces(f.body, q, v, kGravity).ok());
}

TEST(MultibodyCheckTest, PointJacobianMatchesPointVelocity) {
  const Fixture f = Make(true);
  std::mt19937_64 rng(29);
  const Eigen::VectorXd q = RandomQ(f.body, rng);
  const Eigen::VectorXd v = RandomV(f.body, rng);
  Kinematics kin;
  ComputeKinematics(f.body, q, v, &kin);
  const int foot = f.body.FindLink(model::kRightFoot);
  const Eigen::Vector3d point = kin.pos[foot] + Eigen::Vector3d(0.05, -0.02, -0.08);
  Jacobian3 jac;
  PointJacobian(f.body, kin, foot, point, &jac);
  EXPECT_LT((jac * v - PointVelocityWorld(kin, foot, point)).norm(), 1e-12);
}

}  // namespace
}  // namespace boardpush::dynamics

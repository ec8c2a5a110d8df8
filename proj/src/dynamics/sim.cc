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

#include "boardpush/dynamics/sim.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace boardpush::dynamics {
namespace {

using spatial::Mat3;
using spatial::Vec3;

constexpr int kMaxSystemDof = 2 * kMaxDof;
using SystemVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxSystemDof, 1>;
using SystemMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxSystemDof, kMaxSystemDof>;
using SystemJacobian = Eigen::Matrix<double, 3, Eigen::Dynamic, 0, 3, kMaxSystemDof>;

Mat3 RootRotation(const Eigen::Ref<const Eigen::VectorXd>& q) {
  return spatial::Quat(q[3], q[4], q[5], q[6]).normalized().toRotationMatrix();
}

// Wheel rolling direction: deck heading on the ground plane, turned about +z.
Vec3 RollingDirection(const Mat3& deck_rot, double steer) {
  Vec3 heading(deck_rot(0, 0), deck_rot(1, 0), 0.0);
  const double norm = heading.norm();
  heading = norm > 1e-9 ? Vec3(heading / norm) : Vec3::UnitX();
  return Eigen::AngleAxisd(steer, Vec3::UnitZ()) * heading;
}

void FinishPatch(ActiveContact* c) {
  Vec3 centroid = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double deepest = 0.0;
  for (int i = 0; i < c->num_points; ++i) {
    centroid += c->points[i];
    velocity += c->velocities[i];
    deepest = std::max(deepest, c->depths[i]);
  }
  c->point = centroid / c->num_points;
  c->rel_velocity = velocity / c->num_points;
  c->penetration = deepest;
}

// Contacts of the trees at the given kinematics.
void Detect(const World& world, const Kinematics* kin_robot, const Kinematics& kin_board,
            const Eigen::Ref<const Eigen::VectorXd>& q_board,
            std::vector<ActiveContact>* contacts) {
  contacts->clear();
  const model::ModelParams& params = world.params();
  const model::FrictionParams& friction = params.friction;

  if (kin_robot != nullptr) {
    const int deck = world.deck();
    const Mat3& deck_rot = kin_board.rot[deck];
    const Vec3& deck_pos = kin_board.pos[deck];
    const model::SkateboardParams& s = params.skateboard;
    for (int side = 0; side < 2; ++side) {
      const int foot = world.foot(side);
      const model::Geom& sole = world.robot().link(foot).geometry.front();
      ActiveContact ground;
      ground.pair = ContactPair::kFootGround;
      ground.index = side;
      ground.normal = Vec3::UnitZ();
      ground.friction_frame = {Vec3::UnitX(), Vec3::UnitY()};
      ground.mu = {friction.mu_ground_foot, friction.mu_ground_foot};
      ActiveContact on_deck;
      on_deck.pair = ContactPair::kFootDeck;
      on_deck.index = side;
      on_deck.normal = deck_rot.col(2);
      on_deck.friction_frame = {deck_rot.col(0), deck_rot.col(1)};
      on_deck.mu = {friction.mu_deck_foot, friction.mu_deck_foot};
      for (const double sx : {0.5, -0.5}) {
        for (const double sy : {0.5, -0.5}) {
          const Vec3 local = sole.pos + Vec3(sx * sole.size.x(), sy * sole.size.y(),
                                             -0.5 * sole.size.z());
          const Vec3 p = kin_robot->pos[foot] + kin_robot->rot[foot] * local;
          const Vec3 vel = PointVelocityWorld(*kin_robot, foot, p);
          if (p.z() < 0.0) {
            const int k = ground.num_points++;
            ground.points[k] = p;
            ground.depths[k] = -p.z();
            ground.velocities[k] = vel;
          }
          // Only the right foot stands on the deck.
          if (side != 1) continue;
          const Vec3 in_deck = deck_rot.transpose() * (p - deck_pos);
          const double depth = 0.5 * s.deck_thickness - in_deck.z();
          if (depth > 0.0 && depth < s.deck_thickness &&
              std::abs(in_deck.x()) <= 0.5 * s.deck_length &&
              std::abs(in_deck.y()) <= 0.5 * s.deck_width) {
            const int k = on_deck.num_points++;
            on_deck.points[k] = p;
            on_deck.depths[k] = depth;
            on_deck.velocities[k] = vel - PointVelocityWorld(kin_board, deck, p);
          }
        }
      }
      if (ground.num_points > 0) {
        FinishPatch(&ground);
        contacts->push_back(ground);
      }
      if (on_deck.num_points > 0) {
        FinishPatch(&on_deck);
        contacts->push_back(on_deck);
      }
    }
  }

  const double steer =
      SteerAngle(std::clamp(DeckRoll(q_board), -0.5 * std::numbers::pi + 1e-6,
                            0.5 * std::numbers::pi - 1e-6),
                 params.skateboard.truck_rake);
  for (int truck = 0; truck < 2; ++truck) {
    const int hanger = world.hanger(truck);
    const Vec3 rolling = RollingDirection(kin_board.rot[world.deck()], truck == 0 ? steer : -steer);
    const auto& wheels = world.board().link(hanger).geometry;
    for (int w = 0; w < static_cast<int>(wheels.size()); ++w) {
      const double radius = wheels[w].size.x();
      const Vec3 center = kin_board.pos[hanger] + kin_board.rot[hanger] * wheels[w].pos;
      if (center.z() >= radius) continue;
      ActiveContact c;
      c.pair = ContactPair::kWheelGround;
      c.index = 2 * truck + w;
      c.point = center - radius * Vec3::UnitZ();
      c.normal = Vec3::UnitZ();
      c.penetration = radius - center.z();
      c.rel_velocity = PointVelocityWorld(kin_board, hanger, c.point);
      c.friction_frame = {rolling, Vec3::UnitZ().cross(rolling)};
      c.mu = {friction.mu_wheel_roll, friction.mu_wheel_lat};
      c.num_points = 1;
      c.points[0] = c.point;
      c.depths[0] = c.penetration;
      c.velocities[0] = c.rel_velocity;
      contacts->push_back(c);
    }
  }
}

double NormalForce(const ActiveContact& c, const ContactMaterial& material) {
  double total = 0.0;
  for (int i = 0; i < c.num_points; ++i) {
    total += PointForce(c, material, c.depths[i], c.velocities[i]).dot(c.normal);
  }
  return total;
}

// Rigid twist added to the root so that the tree's momentum becomes
// (target_linear, target_angular about the world origin).
void ProjectMomentum(const Multibody& body, const Eigen::Ref<const Eigen::VectorXd>& q,
                     const Vec3& target_linear, const Vec3& target_angular,
                     Eigen::Ref<Eigen::VectorXd> v) {
  Kinematics kin;
  ComputeKinematics(body, q, v, &kin);
  const MomentumSummary m = Momentum(body, kin);
  const Vec3 dp = target_linear - m.linear;
  const Vec3 dl = target_angular - m.angular;
  const Vec3 d_omega = m.com_inertia.ldlt().solve(dl - m.com.cross(dp));
  const Vec3 d_com = dp / m.mass;
  v.segment<3>(0) += d_com + d_omega.cross(kin.pos[0] - m.com);
  v.segment<3>(3) += kin.rot[0].transpose() * d_omega;
}

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

nlohmann::json VecJson(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

}  // namespace

absl::StatusOr<World> World::Create(const model::ModelParams& params,
                                    const WorldOptions& options) {
  if (absl::Status s = ValidateMaterial(options.material); !s.ok()) return s;
  if (!options.gravity.allFinite()) return absl::InvalidArgumentError("gravity must be finite");
  World world;
  world.params_ = params;
  world.options_ = options;
  absl::StatusOr<model::KinematicTree> board_tree = model::BuildSkateboardTree(params);
  if (!board_tree.ok()) return board_tree.status();
  world.board_tree_ = *std::move(board_tree);
  absl::StatusOr<Multibody> board = Multibody::Compile(world.board_tree_);
  if (!board.ok()) return board.status();
  world.board_ = *std::move(board);
  world.hangers_ = {world.board_.FindLink(model::kFrontHanger),
                    world.board_.FindLink(model::kRearHanger)};
  if (options.with_robot) {
    absl::StatusOr<model::KinematicTree> robot_tree = model::BuildRobotTree(params);
    if (!robot_tree.ok()) return robot_tree.status();
    world.robot_tree_ = *std::move(robot_tree);
    absl::StatusOr<Multibody> robot = Multibody::Compile(world.robot_tree_);
    if (!robot.ok()) return robot.status();
    world.robot_ = *std::move(robot);
    world.feet_ = {world.robot_.FindLink(model::kLeftFoot),
                   world.robot_.FindLink(model::kRightFoot)};
  }
  return world;
}

SimState World::DefaultState() const {
  SimState state;
  if (has_robot()) {
    state.q_robot = robot_.NeutralConfiguration();
    state.v_robot = Eigen::VectorXd::Zero(robot_.nv());
  }
  state.q_board = board_.NeutralConfiguration();
  const model::SkateboardParams& s = params_.skateboard;
  state.q_board[2] = s.truck_height + s.axle_drop + s.wheel_radius;
  state.v_board = Eigen::VectorXd::Zero(board_.nv());
  return state;
}

double DeckRoll(const Eigen::Ref<const Eigen::VectorXd>& q_board) {
  const Mat3 r = RootRotation(q_board);
  return std::atan2(-r(2, 1), r(2, 2));
}

std::vector<ActiveContact> DetectContacts(const World& world, const SimState& state) {
  Kinematics kin_robot;
  Kinematics kin_board;
  if (world.has_robot()) ComputeKinematics(world.robot(), state.q_robot, state.v_robot, &kin_robot);
  ComputeKinematics(world.board(), state.q_board, state.v_board, &kin_board);
  std::vector<ActiveContact> contacts;
  Detect(world, world.has_robot() ? &kin_robot : nullptr, kin_board, state.q_board, &contacts);
  for (ActiveContact& c : contacts) c.normal_force = NormalForce(c, world.options().material);
  return contacts;
}

absl::Status CheckState(const World& world, const SimState& state) {
  if (world.has_robot()) {
    if (absl::Status s = CheckConfiguration(world.robot(), state.q_robot); !s.ok()) {
      return absl::InvalidArgumentError(absl::StrCat("robot: ", s.message()));
    }
    if (state.v_robot.size() != world.robot().nv() || !state.v_robot.allFinite()) {
      return absl::InvalidArgumentError("robot: velocity has wrong size or is not finite");
    }
  } else if (state.q_robot.size() != 0 || state.v_robot.size() != 0) {
    return absl::InvalidArgumentError("robot coordinates given in a board-only world");
  }
  if (absl::Status s = CheckConfiguration(world.board(), state.q_board); !s.ok()) {
    return absl::InvalidArgumentError(absl::StrCat("board: ", s.message()));
  }
  if (state.v_board.size() != world.board().nv() || !state.v_board.allFinite()) {
    return absl::InvalidArgumentError("board: velocity has wrong size or is not finite");
  }
  if (!(state.t >= 0.0) || !std::isfinite(state.t)) {
    return absl::InvalidArgumentError("time must be finite and non-negative");
  }
  return absl::OkStatus();
}

absl::Status Step(const World& world, const StepInput& input, double dt, SimState* state) {
  if (!(dt > 0.0 && dt <= 0.01)) {
    return absl::InvalidArgumentError(absl::StrCat("dt must lie in (0, 0.01] (got ", dt, ")"));
  }
  const bool with_robot = world.has_robot();
  const Multibody& robot = world.robot();
  const Multibody& board = world.board();
  if (!input.joint_torques.empty()) {
    const size_t expected = with_robot ? robot.actuated_dofs().size() : 0;
    if (input.joint_torques.size() != expected) {
      return absl::InvalidArgumentError(absl::StrCat(
          "expected ", expected, " joint torques, got ", input.joint_torques.size()));
    }
    for (double tau : input.joint_torques) {
      if (!std::isfinite(tau)) return absl::InvalidArgumentError("joint torque is not finite");
    }
  }
  if (!input.deck_force.allFinite()) return absl::InvalidArgumentError("deck force not finite");

  const double h = dt;
  const Vec3& gravity = world.options().gravity;
  const ContactMaterial& material = world.options().material;
  const int nr = with_robot ? robot.nv() : 0;
  const int nb = board.nv();
  const int n = nr + nb;

  // Momentum of each tree before the step, for the impulse balance.
  Kinematics kin_robot;
  Kinematics kin_board;
  MomentumSummary robot_before;
  MomentumSummary board_before;
  const bool project = world.options().momentum_projection;
  if (project) {
    if (with_robot) {
      ComputeKinematics(robot, state->q_robot, state->v_robot, &kin_robot);
      robot_before = Momentum(robot, kin_robot);
    }
    ComputeKinematics(board, state->q_board, state->v_board, &kin_board);
    board_before = Momentum(board, kin_board);
  }

  // Drift half a step, evaluate forces there.
  VectorN q_robot_mid(with_robot ? robot.nq() : 0);
  VectorN q_board_mid(board.nq());
  if (with_robot) Integrate(robot, state->q_robot, state->v_robot, 0.5 * h, q_robot_mid);
  Integrate(board, state->q_board, state->v_board, 0.5 * h, q_board_mid);
  if (with_robot) ComputeKinematics(robot, q_robot_mid, state->v_robot, &kin_robot);
  ComputeKinematics(board, q_board_mid, state->v_board, &kin_board);

  SystemMatrix a = SystemMatrix::Zero(n, n);
  SystemVector f = SystemVector::Zero(n);
  {
    MatrixN m;
    VectorN c;
    if (with_robot) {
      MassMatrix(robot, kin_robot, &m);
      BiasForces(robot, kin_robot, gravity, &c);
      a.topLeftCorner(nr, nr) = m;
      f.head(nr) = -c;
      for (size_t i = 0; i < input.joint_torques.size(); ++i) {
        f[robot.actuated_dofs()[i]] += input.joint_torques[i];
      }
    }
    MassMatrix(board, kin_board, &m);
    BiasForces(board, kin_board, gravity, &c);
    a.bottomRightCorner(nb, nb) = m;
    f.tail(nb) = -c;
  }

  // Passive joint springs; damping is taken implicitly.
  auto add_springs = [&](const Multibody& body, const Eigen::Ref<const VectorN>& q,
                         const Eigen::VectorXd& v, int offset) {
    for (int i = 0; i < body.num_links(); ++i) {
      const Multibody::Link& link = body.link(i);
      if (link.kind != model::JointKind::kRevolute) continue;
      if (link.stiffness == 0.0 && link.damping == 0.0) continue;
      const int k = offset + link.v_index;
      f[k] += TruckTorque(q[link.q_index], v[link.v_index], link.stiffness, link.damping);
      a(k, k) += h * link.damping;
    }
  };
  if (with_robot) add_springs(robot, q_robot_mid, state->v_robot, 0);
  add_springs(board, q_board_mid, state->v_board, nr);

  const Vec3 deck_com = ComWorld(board, kin_board, world.deck());
  Jacobian3 jac;
  if (!input.deck_force.isZero(0.0)) {
    PointJacobian(board, kin_board, world.deck(), deck_com, &jac);
    f.tail(nb) += jac.transpose() * input.deck_force;
  }

  std::vector<ActiveContact>& contacts = state->contacts;
  std::vector<ActiveContact> next_contacts;
  next_contacts.swap(contacts);
  Detect(world, with_robot ? &kin_robot : nullptr, kin_board, q_board_mid, &next_contacts);
  bool robot_touches = false;
  bool board_touches = false;
  SystemJacobian jrel;
  for (ActiveContact& c : next_contacts) {
    c.normal_force = 0.0;
    for (int p = 0; p < c.num_points; ++p) {
      const Vec3 point = c.points[p];
      jrel.setZero(3, n);
      switch (c.pair) {
        case ContactPair::kFootGround:
          PointJacobian(robot, kin_robot, world.foot(c.index), point, &jac);
          jrel.leftCols(nr) = jac;
          robot_touches = true;
          break;
        case ContactPair::kFootDeck:
          PointJacobian(robot, kin_robot, world.foot(c.index), point, &jac);
          jrel.leftCols(nr) = jac;
          PointJacobian(board, kin_board, world.deck(), point, &jac);
          jrel.rightCols(nb) = -jac;
          robot_touches = true;
          board_touches = true;
          break;
        case ContactPair::kWheelGround:
          PointJacobian(board, kin_board, world.hanger(c.index / 2), point, &jac);
          jrel.rightCols(nb) = jac;
          board_touches = true;
          break;
      }
      const Vec3 force = PointForce(c, material, c.depths[p], c.velocities[p]);
      const double fn = force.dot(c.normal);
      c.normal_force += fn;
      f += jrel.transpose() * force;
      if (fn <= 0.0) continue;
      // Friction slopes enter implicitly; the normal law stays explicit so
      // the applied normal force is exactly the unilateral one above.
      Mat3 slope = Mat3::Zero();
      for (int t = 0; t < 2; ++t) {
        const Vec3& dir = c.friction_frame[t];
        const double th = std::tanh(dir.dot(c.velocities[p]) / material.v_eps);
        slope += (c.mu[t] * fn * (1.0 - th * th) / material.v_eps) * dir * dir.transpose();
      }
      a.noalias() += h * jrel.transpose() * slope * jrel;
    }
  }

  const Eigen::LLT<SystemMatrix> llt(a);
  const SystemVector dv = llt.solve(h * f);

  Eigen::VectorXd q_robot_next;
  Eigen::VectorXd v_robot_next;
  if (with_robot) {
    v_robot_next = state->v_robot + dv.head(nr);
    q_robot_next.resize(robot.nq());
    Integrate(robot, q_robot_mid, v_robot_next, 0.5 * h, q_robot_next);
  }
  Eigen::VectorXd v_board_next = state->v_board + dv.tail(nb);
  Eigen::VectorXd q_board_next(board.nq());
  Integrate(board, q_board_mid, v_board_next, 0.5 * h, q_board_next);

  if (project) {
    if (with_robot && !robot_touches) {
      const MomentumSummary& m = robot_before;
      const Vec3 com_mid = [&] {
        Vec3 weighted = Vec3::Zero();
        for (int i = 0; i < robot.num_links(); ++i) {
          weighted += robot.link(i).mass * ComWorld(robot, kin_robot, i);
        }
        return Vec3(weighted / m.mass);
      }();
      const Vec3 weight = m.mass * gravity;
      ProjectMomentum(robot, q_robot_next, m.linear + h * weight,
                      m.angular + h * com_mid.cross(weight), v_robot_next);
    }
    if (!board_touches) {
      const MomentumSummary& m = board_before;
      Vec3 weighted = Vec3::Zero();
      for (int i = 0; i < board.num_links(); ++i) {
        weighted += board.link(i).mass * ComWorld(board, kin_board, i);
      }
      const Vec3 com_mid = weighted / m.mass;
      const Vec3 weight = m.mass * gravity;
      ProjectMomentum(board, q_board_next, m.linear + h * (weight + input.deck_force),
                      m.angular + h * (com_mid.cross(weight) + deck_com.cross(input.deck_force)),
                      v_board_next);
    }
  }

  const bool finite = llt.info() == Eigen::Success && q_board_next.allFinite() &&
                      v_board_next.allFinite() &&
                      (!with_robot || (q_robot_next.allFinite() && v_robot_next.allFinite()));
  if (!finite) {
    state->contacts.swap(next_contacts);
    absl::Status error = absl::InternalError(
        absl::StrCat("diverged: non-finite state after step at t = ", state->t));
    error.SetPayload(kSnapshotPayload, absl::Cord(StateToJson(*state).dump()));
    return error;
  }
  if (with_robot) {
    state->q_robot = std::move(q_robot_next);
    state->v_robot = std::move(v_robot_next);
  }
  state->q_board = std::move(q_board_next);
  state->v_board = std::move(v_board_next);
  state->t += h;
  state->contacts.swap(next_contacts);
  return absl::OkStatus();
}

absl::StatusOr<SimState> Step(const World& world, const SimState& state, const StepInput& input,
                              double dt) {
  SimState next = state;
  if (absl::Status s = Step(world, input, dt, &next); !s.ok()) return s;
  return next;
}

nlohmann::json StateToJson(const SimState& state) {
  nlohmann::json contacts = nlohmann::json::array();
  for (const ActiveContact& c : state.contacts) {
    contacts.push_back({{"pair", std::string(ContactPairName(c.pair))},
                        {"index", c.index},
                        {"point", VecJson(c.point)},
                        {"normal", VecJson(c.normal)},
                        {"penetration", c.penetration},
                        {"normal_force", c.normal_force}});
  }
  return {{"t", state.t},
          {"q", ToStd(state.q_robot)},
          {"v", ToStd(state.v_robot)},
          {"q_board", ToStd(state.q_board)},
          {"v_board", ToStd(state.v_board)},
          {"contacts", contacts}};
}

absl::StatusOr<SimState> StateFromJson(const World& world, const nlohmann::json& object) {
  SimState state;
  try {
    state.t = object.at("t").get<double>();
    auto read = [&](const char* key, Eigen::VectorXd* out) {
      const std::vector<double> values = object.at(key).get<std::vector<double>>();
      *out = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
    };
    read("q", &state.q_robot);
    read("v", &state.v_robot);
    read("q_board", &state.q_board);
    read("v_board", &state.v_board);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("malformed state: ", e.what()));
  }
  if (absl::Status s = CheckState(world, state); !s.ok()) return s;
  if (!object.contains("contacts")) {
    state.contacts = DetectContacts(world, state);
    return state;
  }
  try {
    for (const nlohmann::json& item : object.at("contacts")) {
      ActiveContact c;
      const std::string pair = item.at("pair").get<std::string>();
      if (pair == ContactPairName(ContactPair::kFootGround)) {
        c.pair = ContactPair::kFootGround;
      } else if (pair == ContactPairName(ContactPair::kFootDeck)) {
        c.pair = ContactPair::kFootDeck;
      } else if (pair == ContactPairName(ContactPair::kWheelGround)) {
        c.pair = ContactPair::kWheelGround;
      } else {
        return absl::InvalidArgumentError(absl::StrCat("unknown contact pair '", pair, "'"));
      }
      c.index = item.at("index").get<int>();
      const auto point = item.at("point").get<std::array<double, 3>>();
      const auto normal = item.at("normal").get<std::array<double, 3>>();
      c.point = Vec3(point[0], point[1], point[2]);
      c.normal = Vec3(normal[0], normal[1], normal[2]);
      c.penetration = item.at("penetration").get<double>();
      c.normal_force = item.at("normal_force").get<double>();
      state.contacts.push_back(c);
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("malformed contact: ", e.what()));
  }
  return state;
}

}  // namespace boardpush::dynamics

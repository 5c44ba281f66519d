// Copyright 2026 The Quadlab Authors
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

#include "quadlab/quadsim.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "quadlab/csv.h"

namespace quadlab {
namespace {

using Jacobian = Eigen::Matrix<double, 2, kNumDof>;
using DofVector = Eigen::Matrix<double, kNumDof, 1>;
using MassMatrix = Eigen::Matrix<double, kNumDof, kNumDof>;

constexpr int kPitch = 2;
constexpr int HipDof(int leg) { return 3 + 2 * leg; }
constexpr int KneeDof(int leg) { return 4 + 2 * leg; }

struct Vec2 {
  double x = 0.0;
  double z = 0.0;
};

Vec2 Rotate(double angle, Vec2 v) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.z, s * v.x + c * v.z};
}

// Position, Jacobian and velocity-product acceleration (Jdot * qdot) of a
// material point. A point is the torso origin plus a chain of link vectors,
// each rotating with an absolute angle that is a sum of generalized
// coordinates.
struct PointKinematics {
  Vec2 pos;
  Jacobian jac = Jacobian::Zero();
  Vec2 bias;

  PointKinematics() : PointKinematics(0.0, 0.0) {}
  PointKinematics(double x, double z) : pos{x, z} {
    jac(0, 0) = 1.0;
    jac(1, 1) = 1.0;
  }

  void AddLink(Vec2 r, std::initializer_list<int> angle_dofs,
               double angular_velocity) {
    pos.x += r.x;
    pos.z += r.z;
    // d/dphi of a rotated vector is the vector turned by +90 degrees
    for (int dof : angle_dofs) {
      jac(0, dof) += -r.z;
      jac(1, dof) += r.x;
    }
    const double w2 = angular_velocity * angular_velocity;
    bias.x -= r.x * w2;
    bias.z -= r.z * w2;
  }

  Vec2 Velocity(const DofVector& qdot) const {
    const Eigen::Vector2d v = jac * qdot;
    return {v(0), v(1)};
  }
};

DofVector Positions(const BodyState& s) {
  DofVector q;
  q << s.torso_x, s.torso_z, s.torso_pitch, 0, 0, 0, 0, 0, 0, 0, 0;
  for (int j = 0; j < kNumActuators; ++j) q(3 + j) = s.joint_angles[j];
  return q;
}

DofVector Velocities(const BodyState& s) {
  DofVector v;
  v << s.torso_vx, s.torso_vz, s.torso_pitch_rate, 0, 0, 0, 0, 0, 0, 0, 0;
  for (int j = 0; j < kNumActuators; ++j) v(3 + j) = s.joint_velocities[j];
  return v;
}

constexpr int kNumBodies = 1 + 2 * kNumLegs;

// Everything the dynamics needs at one configuration. Body 0 is the torso,
// then thigh and shank of each leg in leg order.
struct Kinematics {
  std::array<PointKinematics, kNumBodies> coms;
  std::array<double, kNumBodies> masses{};
  std::array<double, kNumBodies> inertias{};
  std::array<std::array<int, 3>, kNumBodies> angle_dofs{};  // -1 = unused
  std::array<PointKinematics, kNumContacts> contacts;
};

Kinematics ComputeKinematics(const SimConfig& c, const BodyState& s) {
  Kinematics k;
  const double pitch = s.torso_pitch;
  const double pitch_rate = s.torso_pitch_rate;

  k.coms[0] = PointKinematics(s.torso_x, s.torso_z);
  k.masses[0] = c.torso_mass;
  k.inertias[0] = c.torso_mass * c.torso_length * c.torso_length / 12.0;
  k.angle_dofs[0] = {kPitch, -1, -1};

  const double half = 0.5 * c.torso_length;
  for (int end = 0; end < 2; ++end) {
    PointKinematics tip(s.torso_x, s.torso_z);
    tip.AddLink(Rotate(pitch, {end == 0 ? half : -half, 0.0}), {kPitch},
                pitch_rate);
    k.contacts[kNumLegs + end] = tip;
  }

  for (int leg = 0; leg < kNumLegs; ++leg) {
    const int hip = HipDof(leg), knee = KneeDof(leg);
    const double thigh_angle = pitch + s.joint_angles[2 * leg];
    const double shank_angle = thigh_angle + s.joint_angles[2 * leg + 1];
    const double thigh_rate = pitch_rate + s.joint_velocities[2 * leg];
    const double shank_rate = thigh_rate + s.joint_velocities[2 * leg + 1];
    const Vec2 hip_offset = Rotate(pitch, {leg < 2 ? half : -half, 0.0});

    PointKinematics thigh_com(s.torso_x, s.torso_z);
    thigh_com.AddLink(hip_offset, {kPitch}, pitch_rate);
    PointKinematics knee_point = thigh_com;
    thigh_com.AddLink(Rotate(thigh_angle, {0.0, -0.5 * c.thigh_length}),
                      {kPitch, hip}, thigh_rate);
    knee_point.AddLink(Rotate(thigh_angle, {0.0, -c.thigh_length}),
                       {kPitch, hip}, thigh_rate);

    PointKinematics shank_com = knee_point;
    PointKinematics foot = knee_point;
    shank_com.AddLink(Rotate(shank_angle, {0.0, -0.5 * c.shank_length}),
                      {kPitch, hip, knee}, shank_rate);
    foot.AddLink(Rotate(shank_angle, {0.0, -c.shank_length}),
                 {kPitch, hip, knee}, shank_rate);

    const int thigh = 1 + 2 * leg, shank = 2 + 2 * leg;
    k.coms[thigh] = thigh_com;
    k.masses[thigh] = c.thigh_mass;
    k.inertias[thigh] = c.thigh_mass * c.thigh_length * c.thigh_length / 12.0;
    k.angle_dofs[thigh] = {kPitch, hip, -1};
    k.coms[shank] = shank_com;
    k.masses[shank] = c.shank_mass;
    k.inertias[shank] = c.shank_mass * c.shank_length * c.shank_length / 12.0;
    k.angle_dofs[shank] = {kPitch, hip, knee};
    k.contacts[leg] = foot;
  }
  return k;
}

MassMatrix ComputeMassMatrix(const Kinematics& k) {
  MassMatrix m = MassMatrix::Zero();
  for (int b = 0; b < kNumBodies; ++b) {
    m.noalias() += k.masses[b] * k.coms[b].jac.transpose() * k.coms[b].jac;
    for (int i : k.angle_dofs[b]) {
      if (i < 0) continue;
      for (int j : k.angle_dofs[b]) {
        if (j >= 0) m(i, j) += k.inertias[b];
      }
    }
  }
  return m;
}

}  // namespace

double SimConfig::StandingHeight() const {
  return thigh_length * std::cos(stance_hip) +
         shank_length * std::cos(stance_hip + stance_knee);
}

void SimConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("SimConfig: ") + what);
  };
  require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
  require(substeps >= 1, "substeps must be >= 1");
  require(gravity > 0.0 && std::isfinite(gravity), "gravity must be positive");
  require(healthy_z_min < healthy_z_max, "healthy_z_min must be < max");
  require(horizon >= 1, "horizon must be >= 1");
  require(max_torque >= 0.0, "max_torque must be non-negative");
  require(torso_mass > 0 && thigh_mass > 0 && shank_mass > 0,
          "masses must be positive");
  require(torso_length > 0 && thigh_length > 0 && shank_length > 0,
          "lengths must be positive");
  require(hip_limit > 0 && knee_limit > 0, "joint limits must be positive");
  require(std::abs(stance_hip) <= hip_limit &&
              std::abs(stance_knee) <= knee_limit,
          "stance pose violates joint limits");
  require(reset_noise >= 0.0, "reset_noise must be non-negative");
  require(ground_stiffness > 0 && ground_damping >= 0 && friction >= 0 &&
              tangential_stiffness > 0 && tangential_damping >= 0,
          "contact parameters must be non-negative");
  require(gait_period > 0.0, "gait_period must be positive");
}

void SimConfig::ReadFrom(ConfigFile& f) {
  const std::string s = "sim";
  f.TakeDouble(s, "dt", &dt);
  f.TakeInt(s, "substeps", &substeps);
  f.TakeDouble(s, "gravity", &gravity);
  f.TakeDouble(s, "max_torque", &max_torque);
  f.TakeDouble(s, "torso_length", &torso_length);
  f.TakeDouble(s, "torso_mass", &torso_mass);
  f.TakeDouble(s, "thigh_length", &thigh_length);
  f.TakeDouble(s, "thigh_mass", &thigh_mass);
  f.TakeDouble(s, "shank_length", &shank_length);
  f.TakeDouble(s, "shank_mass", &shank_mass);
  f.TakeDouble(s, "hip_limit", &hip_limit);
  f.TakeDouble(s, "knee_limit", &knee_limit);
  f.TakeDouble(s, "joint_damping", &joint_damping);
  f.TakeDouble(s, "stance_hip", &stance_hip);
  f.TakeDouble(s, "stance_knee", &stance_knee);
  f.TakeDouble(s, "reset_noise", &reset_noise);
  f.TakeDouble(s, "ground_stiffness", &ground_stiffness);
  f.TakeDouble(s, "ground_damping", &ground_damping);
  f.TakeDouble(s, "friction", &friction);
  f.TakeDouble(s, "tangential_stiffness", &tangential_stiffness);
  f.TakeDouble(s, "tangential_damping", &tangential_damping);
  f.TakeDouble(s, "healthy_z_min", &healthy_z_min);
  f.TakeDouble(s, "healthy_z_max", &healthy_z_max);
  f.TakeInt(s, "horizon", &horizon);
  f.TakeDouble(s, "gait_period", &gait_period);
  std::string mode = ToString(reward_mode);
  f.TakeString(s, "reward_mode", &mode);
  reward_mode = ParseRewardMode(mode);
  f.TakeBool(s, "failure_injection", &failure_injection);
}

void SimConfig::WriteTo(ConfigFile& f) const {
  const std::string s = "sim";
  auto put = [&](const char* key, double v) { f.Set(s, key, FormatDecimal(v)); };
  put("dt", dt);
  f.Set(s, "substeps", std::to_string(substeps));
  put("gravity", gravity);
  put("max_torque", max_torque);
  put("torso_length", torso_length);
  put("torso_mass", torso_mass);
  put("thigh_length", thigh_length);
  put("thigh_mass", thigh_mass);
  put("shank_length", shank_length);
  put("shank_mass", shank_mass);
  put("hip_limit", hip_limit);
  put("knee_limit", knee_limit);
  put("joint_damping", joint_damping);
  put("stance_hip", stance_hip);
  put("stance_knee", stance_knee);
  put("reset_noise", reset_noise);
  put("ground_stiffness", ground_stiffness);
  put("ground_damping", ground_damping);
  put("friction", friction);
  put("tangential_stiffness", tangential_stiffness);
  put("tangential_damping", tangential_damping);
  put("healthy_z_min", healthy_z_min);
  put("healthy_z_max", healthy_z_max);
  f.Set(s, "horizon", std::to_string(horizon));
  put("gait_period", gait_period);
  f.Set(s, "reward_mode", ToString(reward_mode));
  f.Set(s, "failure_injection", failure_injection ? "true" : "false");
}

bool BodyState::AllFinite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  return finite(torso_x) && finite(torso_z) && finite(torso_pitch) &&
         finite(torso_vx) && finite(torso_vz) && finite(torso_pitch_rate) &&
         std::all_of(joint_angles.begin(), joint_angles.end(), finite) &&
         std::all_of(joint_velocities.begin(), joint_velocities.end(), finite);
}

Simulator::Simulator(SimConfig config) : config_(config) {
  config_.Validate();
}

std::array<double, kObservationSize> Simulator::Reset(
    uint64_t seed, const FailureSpec& failure) {
  failure.Validate();
  failure_ = failure;

  Rng rng(seed);
  state_ = BodyState{};
  state_.torso_z = config_.StandingHeight();
  const double noise = config_.reset_noise;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    state_.joint_angles[2 * leg] = config_.stance_hip;
    state_.joint_angles[2 * leg + 1] = config_.stance_knee;
  }
  for (double& angle : state_.joint_angles) {
    angle += noise * (2.0 * rng.Uniform() - 1.0);
  }

  step_count_ = 0;
  done_ = false;
  progress_ = 0.0;
  initial_torso_x_ = state_.torso_x;
  raw_torques_.fill(0.0);
  applied_torques_.fill(0.0);
  contact_forces_.fill(0.0);
  anchors_.fill(0.0);
  anchor_active_.fill(false);
  foot_contact_.fill(false);
  return Observe();
}

void Simulator::SetBodyState(const BodyState& state) {
  if (!state.AllFinite()) {
    throw std::invalid_argument("SetBodyState: non-finite state");
  }
  state_ = state;
  anchor_active_.fill(false);
  foot_contact_.fill(false);
}

std::array<double, kObservationSize> Simulator::Observe() const {
  std::array<double, kObservationSize> obs{};
  int i = 0;
  for (double a : state_.joint_angles) obs[i++] = a;
  for (double v : state_.joint_velocities) obs[i++] = v;
  obs[i++] = state_.torso_z;
  obs[i++] = state_.torso_pitch;
  obs[i++] = state_.torso_vx;
  obs[i++] = state_.torso_vz;
  obs[i++] = state_.torso_pitch_rate;
  for (bool contact : foot_contact_) obs[i++] = contact ? 1.0 : 0.0;
  const double t = step_count_ * config_.dt;
  obs[i++] = std::sin(2.0 * std::numbers::pi * t / config_.gait_period);
  obs[i++] = 0.0;
  return obs;
}

void Simulator::Substep(const std::array<double, kNumActuators>& torques,
                        std::array<double, kNumContacts>& normal_force_sum) {
  const SimConfig& c = config_;
  const double h = c.dt / c.substeps;
  const Kinematics k = ComputeKinematics(c, state_);
  const DofVector qdot = Velocities(state_);

  DofVector force = DofVector::Zero();
  for (int j = 0; j < kNumActuators; ++j) {
    force(3 + j) = torques[j] - c.joint_damping * qdot(3 + j);
  }
  for (int b = 0; b < kNumBodies; ++b) {
    const auto& com = k.coms[b];
    const Eigen::Vector2d accel(com.bias.x, com.bias.z + c.gravity);
    // gravity and the velocity-product term in one projection
    force.noalias() -= k.masses[b] * com.jac.transpose() * accel;
  }

  for (int i = 0; i < kNumContacts; ++i) {
    const auto& point = k.contacts[i];
    const double penetration = -point.pos.z;
    if (penetration <= 0.0) {
      anchor_active_[i] = false;
      if (i < kNumLegs) foot_contact_[i] = false;
      continue;
    }
    const Vec2 v = point.Velocity(qdot);
    const double normal = std::max(
        0.0, c.ground_stiffness * penetration - c.ground_damping * v.z);
    if (!anchor_active_[i]) {
      anchors_[i] = point.pos.x;
      anchor_active_[i] = true;
    }
    double tangential = -c.tangential_stiffness * (point.pos.x - anchors_[i]) -
                        c.tangential_damping * v.x;
    const double limit = c.friction * normal;
    if (std::abs(tangential) > limit) {
      tangential = std::copysign(limit, tangential);
      // slide the anchor so the spring carries exactly the friction limit
      anchors_[i] = point.pos.x + (tangential + c.tangential_damping * v.x) /
                                      c.tangential_stiffness;
    }
    force.noalias() += point.jac.transpose() * Eigen::Vector2d(tangential,
                                                               normal);
    normal_force_sum[i] += normal;
    if (i < kNumLegs) foot_contact_[i] = true;
  }

  const Eigen::LLT<MassMatrix> mass(ComputeMassMatrix(k));
  const DofVector qddot = mass.solve(force);

  // semi-implicit Euler: velocities first, positions with the new velocities
  DofVector v = qdot + h * qddot;
  const DofVector q_start = Positions(state_);

  // Joint limits are inelastic velocity constraints: every joint that would
  // cross its limit gets exactly the velocity that lands it on the limit,
  // via an impulse through the mass matrix so the rest of the body reacts.
  const double limits[2] = {c.hip_limit, c.knee_limit};
  std::array<int, kNumActuators> active{};
  int num_active = 0;
  for (int pass = 0; pass < kNumActuators; ++pass) {
    bool added = false;
    for (int j = 0; j < kNumActuators; ++j) {
      const int dof = 3 + j;
      const double predicted = q_start(dof) + h * v(dof);
      if (std::abs(predicted) <= limits[j % 2]) continue;
      if (std::find(active.begin(), active.begin() + num_active, dof) !=
          active.begin() + num_active) {
        continue;
      }
      active[num_active++] = dof;
      added = true;
    }
    if (!added) break;

    Eigen::MatrixXd inv_mass_cols(kNumDof, num_active);
    Eigen::VectorXd residual(num_active);
    for (int a = 0; a < num_active; ++a) {
      const int dof = active[a];
      inv_mass_cols.col(a) = mass.solve(DofVector::Unit(dof));
      const double bound = std::copysign(limits[(dof - 3) % 2],
                                         q_start(dof) + h * v(dof));
      residual(a) = (bound - q_start(dof)) / h - v(dof);
    }
    Eigen::MatrixXd coupling(num_active, num_active);
    for (int a = 0; a < num_active; ++a) {
      for (int b = 0; b < num_active; ++b) {
        coupling(a, b) = inv_mass_cols(active[a], b);
      }
    }
    v.noalias() += inv_mass_cols * coupling.ldlt().solve(residual);
  }

  DofVector q = q_start + h * v;
  for (int j = 0; j < kNumActuators; ++j) {
    // absorbs rounding from the impulse solve
    q(3 + j) = std::clamp(q(3 + j), -limits[j % 2], limits[j % 2]);
  }

  state_.torso_x = q(0);
  state_.torso_z = q(1);
  state_.torso_pitch = q(2);
  state_.torso_vx = v(0);
  state_.torso_vz = v(1);
  state_.torso_pitch_rate = v(2);
  for (int j = 0; j < kNumActuators; ++j) {
    state_.joint_angles[j] = q(3 + j);
    state_.joint_velocities[j] = v(3 + j);
  }
}

StepOutcome Simulator::Step(std::span<const double> action) {
  if (done_) {
    throw std::logic_error("Step called on a finished episode; call Reset");
  }
  if (action.size() != kNumActuators) {
    throw std::invalid_argument("action must have exactly 8 components");
  }
  for (int j = 0; j < kNumActuators; ++j) {
    if (!std::isfinite(action[j])) {
      throw std::invalid_argument("non-finite action component " +
                                  std::to_string(j));
    }
    raw_torques_[j] = std::clamp(action[j], -1.0, 1.0) * config_.max_torque;
  }
  applied_torques_ = config_.failure_injection
                         ? ApplyFailure(raw_torques_, failure_)
                         : raw_torques_;

  const double x_before = state_.torso_x;
  std::array<double, kNumContacts> normal_sum{};
  for (int i = 0; i < config_.substeps; ++i) Substep(applied_torques_, normal_sum);
  if (!state_.AllFinite()) {
    throw std::runtime_error("simulation diverged at step " +
                             std::to_string(step_count_));
  }
  ++step_count_;

  const double weight = config_.TotalMass() * config_.gravity;
  for (int i = 0; i < kNumContacts; ++i) {
    contact_forces_[i] = normal_sum[i] / config_.substeps / weight;
  }

  StepOutcome out;
  const double displacement = state_.torso_x - x_before;
  progress_ += displacement;
  out.info.v_fwd = displacement / config_.dt;
  out.info.falling = state_.torso_z < config_.healthy_z_min ||
                     state_.torso_z > config_.healthy_z_max;
  out.info.progress = progress_;
  for (double f : contact_forces_) out.info.contact_force_sq += f * f;
  for (double u : applied_torques_) out.info.torque_sq += u * u;
  out.reward = Reward(out.info.v_fwd, applied_torques_, contact_forces_,
                      out.info.falling, config_.reward_mode);
  out.done = out.info.falling || step_count_ >= config_.horizon;
  done_ = out.done;
  out.observation = Observe();
  return out;
}

double Simulator::MechanicalEnergy() const {
  const SimConfig& c = config_;
  const Kinematics k = ComputeKinematics(c, state_);
  const DofVector qdot = Velocities(state_);
  const MassMatrix mass = ComputeMassMatrix(k);
  double energy = 0.5 * qdot.dot(mass * qdot);
  for (int b = 0; b < kNumBodies; ++b) {
    energy += k.masses[b] * c.gravity * k.coms[b].pos.z;
  }
  for (int i = 0; i < kNumContacts; ++i) {
    const auto& point = k.contacts[i];
    const double penetration = -point.pos.z;
    if (penetration <= 0.0) continue;
    energy += 0.5 * c.ground_stiffness * penetration * penetration;
    if (anchor_active_[i]) {
      const double stretch = point.pos.x - anchors_[i];
      energy += 0.5 * c.tangential_stiffness * stretch * stretch;
    }
  }
  return energy;
}

void Simulator::SaveState(TextWriter& out) const {
  const BodyState& s = state_;
  out.PutVector("sim.torso", std::array{s.torso_x, s.torso_z, s.torso_pitch,
                                        s.torso_vx, s.torso_vz,
                                        s.torso_pitch_rate});
  out.PutVector("sim.joint_angles", s.joint_angles);
  out.PutVector("sim.joint_velocities", s.joint_velocities);
  out.PutInt("sim.failure_leg", failure_.leg);
  out.Put("sim.failure_k", failure_.k);
  out.PutInt("sim.step_count", step_count_);
  out.PutInt("sim.done", done_ ? 1 : 0);
  out.Put("sim.progress", progress_);
  out.Put("sim.initial_torso_x", initial_torso_x_);
  out.PutVector("sim.raw_torques", raw_torques_);
  out.PutVector("sim.applied_torques", applied_torques_);
  out.PutVector("sim.contact_forces", contact_forces_);
  out.PutVector("sim.anchors", anchors_);
  std::array<double, kNumContacts> active{};
  for (int i = 0; i < kNumContacts; ++i) active[i] = anchor_active_[i];
  out.PutVector("sim.anchor_active", active);
  std::array<double, kNumLegs> feet{};
  for (int i = 0; i < kNumLegs; ++i) feet[i] = foot_contact_[i];
  out.PutVector("sim.foot_contact", feet);
}

namespace {

template <std::size_t N>
void CopyExact(const std::vector<double>& from, std::array<double, N>& to,
               const char* what) {
  if (from.size() != N) {
    throw std::runtime_error(std::string("wrong length for ") + what);
  }
  std::copy(from.begin(), from.end(), to.begin());
}

}  // namespace

void Simulator::LoadState(TextReader& in) {
  std::array<double, 6> torso{};
  CopyExact(in.GetVector("sim.torso"), torso, "sim.torso");
  state_.torso_x = torso[0];
  state_.torso_z = torso[1];
  state_.torso_pitch = torso[2];
  state_.torso_vx = torso[3];
  state_.torso_vz = torso[4];
  state_.torso_pitch_rate = torso[5];
  CopyExact(in.GetVector("sim.joint_angles"), state_.joint_angles,
            "sim.joint_angles");
  CopyExact(in.GetVector("sim.joint_velocities"), state_.joint_velocities,
            "sim.joint_velocities");
  failure_.leg = static_cast<int>(in.GetInt("sim.failure_leg"));
  failure_.k = in.Get("sim.failure_k");
  failure_.Validate();
  step_count_ = static_cast<int>(in.GetInt("sim.step_count"));
  done_ = in.GetInt("sim.done") != 0;
  progress_ = in.Get("sim.progress");
  initial_torso_x_ = in.Get("sim.initial_torso_x");
  CopyExact(in.GetVector("sim.raw_torques"), raw_torques_, "sim.raw_torques");
  CopyExact(in.GetVector("sim.applied_torques"), applied_torques_,
            "sim.applied_torques");
  CopyExact(in.GetVector("sim.contact_forces"), contact_forces_,
            "sim.contact_forces");
  CopyExact(in.GetVector("sim.anchors"), anchors_, "sim.anchors");
  std::array<double, kNumContacts> active{};
  CopyExact(in.GetVector("sim.anchor_active"), active, "sim.anchor_active");
  for (int i = 0; i < kNumContacts; ++i) anchor_active_[i] = active[i] != 0.0;
  std::array<double, kNumLegs> feet{};
  CopyExact(in.GetVector("sim.foot_contact"), feet, "sim.foot_contact");
  for (int i = 0; i < kNumLegs; ++i) foot_contact_[i] = feet[i] != 0.0;
}

void WriteTrajectoryCsv(const std::filesystem::path& path,
                        std::span<const TrajectoryRow> rows) {
  CsvWriter csv(path, {"t", "torso_x", "torso_z", "pitch", "reward", "done"});
  for (const auto& r : rows) {
    csv.Row({FormatDecimal(r.t), FormatDecimal(r.torso_x),
             FormatDecimal(r.torso_z), FormatDecimal(r.pitch),
             FormatDecimal(r.reward), r.done ? "1" : "0"});
  }
}

}  // namespace quadlab

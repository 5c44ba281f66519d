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

// Planar (side-view) quadruped: a rigid torso carrying four two-link legs,
// eight torque-controlled joints, penalty contact against flat ground at
// z = 0. Coordinates are x forward, z up; pitch is positive nose-up.
//
// Generalized coordinates, 11 in total:
//   [0] torso x   [1] torso z   [2] torso pitch
//   [3 + 2l] hip of leg l       [4 + 2l] knee of leg l
// Legs 0, 1 hang from the front end of the torso, legs 2, 3 from the rear.
// Joint angles are relative to the parent link; zero points the link
// straight down from its joint.

#ifndef QUADLAB_QUADSIM_H_
#define QUADLAB_QUADSIM_H_

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "quadlab/config_file.h"
#include "quadlab/failure.h"
#include "quadlab/reward.h"
#include "quadlab/text_io.h"

namespace quadlab {

inline constexpr int kObservationSize = 27;
inline constexpr int kNumDof = 3 + kNumActuators;
inline constexpr int kNumContacts = kNumLegs + 2;  // feet, then torso ends

struct SimConfig {
  double dt = 0.01;
  int substeps = 4;
  double gravity = 9.81;
  double max_torque = 3.0;

  double torso_length = 0.5;
  double torso_mass = 2.0;
  double thigh_length = 0.15;
  double thigh_mass = 0.25;
  double shank_length = 0.15;
  double shank_mass = 0.2;

  double hip_limit = 1.2;
  double knee_limit = 1.5;
  double joint_damping = 0.05;  // N m s / rad, passive

  // canonical standing pose
  double stance_hip = 0.5;
  double stance_knee = -1.0;
  double reset_noise = 0.05;  // rad, uniform on every joint angle

  double ground_stiffness = 1.0e4;
  double ground_damping = 30.0;
  double friction = 1.0;
  double tangential_stiffness = 5.0e3;
  double tangential_damping = 20.0;

  // Torso height with the canonical pose and feet resting on z = 0.
  double StandingHeight() const;

  double healthy_z_min = 0.3 * StandingHeight();
  double healthy_z_max = 1.5 * StandingHeight();
  int horizon = 1000;
  double gait_period = 0.5;  // s, period of the clock observation

  RewardMode reward_mode = RewardMode::kModified;
  bool failure_injection = true;

  double TotalMass() const {
    return torso_mass + kNumLegs * (thigh_mass + shank_mass);
  }

  // Throws std::invalid_argument on the first violated invariant.
  void Validate() const;

  // Reads/writes the [sim] section.
  void ReadFrom(ConfigFile& file);
  void WriteTo(ConfigFile& file) const;
};

struct BodyState {
  double torso_x = 0.0;
  double torso_z = 0.0;
  double torso_pitch = 0.0;
  double torso_vx = 0.0;
  double torso_vz = 0.0;
  double torso_pitch_rate = 0.0;
  std::array<double, kNumActuators> joint_angles{};
  std::array<double, kNumActuators> joint_velocities{};

  bool AllFinite() const;
  bool operator==(const BodyState&) const = default;
};

struct StepInfo {
  double v_fwd = 0.0;             // torso x displacement / dt
  double contact_force_sq = 0.0;  // squared norm of f_impact
  double torque_sq = 0.0;         // squared norm of applied torques, N^2 m^2
  bool falling = false;
  double progress = 0.0;          // accumulated forward displacement, m
};

struct StepOutcome {
  std::array<double, kObservationSize> observation{};
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

class Simulator {
 public:
  explicit Simulator(SimConfig config = {});

  // Canonical standing pose plus seeded uniform joint-angle noise. The
  // failure is fixed for the whole episode.
  std::array<double, kObservationSize> Reset(uint64_t seed,
                                             const FailureSpec& failure);

  // Actions are normalized torques; each component is clamped to [-1, 1]
  // and scaled by max_torque, then the failure is applied. Throws
  // std::logic_error when the episode is already done.
  StepOutcome Step(std::span<const double> action);

  std::array<double, kObservationSize> Observe() const;

  const SimConfig& config() const { return config_; }
  const BodyState& state() const { return state_; }
  const FailureSpec& failure() const { return failure_; }
  int step_count() const { return step_count_; }
  bool done() const { return done_; }
  double progress() const { return progress_; }
  double initial_torso_x() const { return initial_torso_x_; }

  // Torques of the last step before and after failure scaling, N m.
  const std::array<double, kNumActuators>& last_raw_torques() const {
    return raw_torques_;
  }
  const std::array<double, kNumActuators>& last_applied_torques() const {
    return applied_torques_;
  }
  // Mean normal force per contact point over the last step, in units of
  // total robot weight.
  const std::array<double, kNumContacts>& last_contact_forces() const {
    return contact_forces_;
  }

  // Overwrites the body state of the active episode (tests, diagnostics).
  // Clears contact memory.
  void SetBodyState(const BodyState& state);

  // Kinetic + gravitational + contact-spring energy, J.
  double MechanicalEnergy() const;

  // Complete episode state, enough to continue bit-identically.
  void SaveState(TextWriter& out) const;
  void LoadState(TextReader& in);

 private:
  void Substep(const std::array<double, kNumActuators>& torques,
               std::array<double, kNumContacts>& normal_force_sum);

  SimConfig config_;
  BodyState state_;
  FailureSpec failure_;
  int step_count_ = 0;
  bool done_ = true;
  double progress_ = 0.0;
  double initial_torso_x_ = 0.0;
  std::array<double, kNumActuators> raw_torques_{};
  std::array<double, kNumActuators> applied_torques_{};
  std::array<double, kNumContacts> contact_forces_{};
  std::array<double, kNumContacts> anchors_{};
  std::array<bool, kNumContacts> anchor_active_{};
  std::array<bool, kNumLegs> foot_contact_{};
};

// One row per step of a rollout, for offline inspection.
struct TrajectoryRow {
  double t = 0.0;
  double torso_x = 0.0;
  double torso_z = 0.0;
  double pitch = 0.0;
  double reward = 0.0;
  bool done = false;
};

// Columns: t, torso_x, torso_z, pitch, reward, done.
void WriteTrajectoryCsv(const std::filesystem::path& path,
                        std::span<const TrajectoryRow> rows);

}  // namespace quadlab

#endif  // QUADLAB_QUADSIM_H_

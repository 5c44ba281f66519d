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

#ifndef QUADLAB_REWARD_H_
#define QUADLAB_REWARD_H_

#include <span>
#include <string>

namespace quadlab {

// kModified pays the +1 survival bonus only while the robot is not
// falling; kLegacy pays it unconditionally.
enum class RewardMode { kModified, kLegacy };

std::string ToString(RewardMode mode);
RewardMode ParseRewardMode(const std::string& name);

inline constexpr double kControlCostWeight = 1e-6;
inline constexpr double kContactCostWeight = 1e-3;

struct RewardTerms {
  double forward = 0.0;   // v_fwd
  double control = 0.0;   // -1e-6 |u|^2
  double contact = 0.0;   // -1e-3 |f_impact|^2
  double survival = 0.0;  // s

  double Total() const { return forward + control + contact + survival; }
};

// Throws std::invalid_argument on non-finite inputs.
RewardTerms ComputeRewardTerms(double v_fwd, std::span<const double> torques,
                               std::span<const double> impact_forces,
                               bool falling,
                               RewardMode mode = RewardMode::kModified);

// r = v_fwd - 1e-6 |u|^2 - 1e-3 |f_impact|^2 + s
double Reward(double v_fwd, std::span<const double> torques,
              std::span<const double> impact_forces, bool falling,
              RewardMode mode = RewardMode::kModified);

}  // namespace quadlab

#endif  // QUADLAB_REWARD_H_

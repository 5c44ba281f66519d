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

#include "quadlab/reward.h"

#include <cmath>
#include <stdexcept>

namespace quadlab {
namespace {

double SquaredNorm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("reward: non-finite input");
    }
    sum += x * x;
  }
  return sum;
}

}  // namespace

std::string ToString(RewardMode mode) {
  return mode == RewardMode::kModified ? "modified" : "legacy";
}

RewardMode ParseRewardMode(const std::string& name) {
  if (name == "modified") return RewardMode::kModified;
  if (name == "legacy") return RewardMode::kLegacy;
  throw std::invalid_argument("unknown reward mode '" + name + "'");
}

RewardTerms ComputeRewardTerms(double v_fwd, std::span<const double> torques,
                               std::span<const double> impact_forces,
                               bool falling, RewardMode mode) {
  if (!std::isfinite(v_fwd)) {
    throw std::invalid_argument("reward: non-finite forward velocity");
  }
  RewardTerms terms;
  terms.forward = v_fwd;
  terms.control = -kControlCostWeight * SquaredNorm(torques);
  terms.contact = -kContactCostWeight * SquaredNorm(impact_forces);
  terms.survival = (mode == RewardMode::kLegacy || !falling) ? 1.0 : 0.0;
  return terms;
}

double Reward(double v_fwd, std::span<const double> torques,
              std::span<const double> impact_forces, bool falling,
              RewardMode mode) {
  return ComputeRewardTerms(v_fwd, torques, impact_forces, falling, mode)
      .Total();
}

}  // namespace quadlab

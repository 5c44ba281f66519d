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

#include "quadlab/gae.h"

#include <stdexcept>

namespace quadlab {

GaeResult ComputeGae(std::span<const double> rewards,
                     std::span<const double> values,
                     std::span<const bool> dones, double bootstrap_value,
                     double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) {
    throw std::invalid_argument("ComputeGae: length mismatch");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0 && lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("ComputeGae: gamma, lambda must be in [0, 1]");
  }
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double next_value = bootstrap_value;
  double next_advantage = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double live = dones[i] ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * next_value * live - values[i];
    next_advantage = delta + gamma * lambda * live * next_advantage;
    out.advantages[i] = next_advantage;
    out.returns[i] = next_advantage + values[i];
    next_value = values[i];
  }
  return out;
}

}  // namespace quadlab

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

#ifndef QUADLAB_GAE_H_
#define QUADLAB_GAE_H_

#include <span>
#include <vector>

namespace quadlab {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values
};

// Generalized advantage estimation over one rollout segment.
//   delta_t = r_t + gamma * v_{t+1} * (1 - done_t) - v_t
//   A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
// done_t marks that the episode ended after step t; v_T is bootstrap_value.
GaeResult ComputeGae(std::span<const double> rewards,
                     std::span<const double> values,
                     std::span<const bool> dones, double bootstrap_value,
                     double gamma, double lambda);

}  // namespace quadlab

#endif  // QUADLAB_GAE_H_

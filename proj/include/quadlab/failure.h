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

#ifndef QUADLAB_FAILURE_H_
#define QUADLAB_FAILURE_H_

#include <array>
#include <span>

#include "quadlab/rng.h"

namespace quadlab {

inline constexpr int kNumLegs = 4;
inline constexpr int kNumActuators = 2 * kNumLegs;

// Largest failure coefficient any scheduler may produce. k > 1 models an
// actuator stronger than nominal.
inline constexpr double kMaxFailureCoefficient = 1.5;

// One broken leg per episode. Leg l owns actuators {2l, 2l + 1} (hip, knee).
// k = 1 is a healthy actuator, k = 0 a dead one.
struct FailureSpec {
  int leg = 0;
  double k = 1.0;

  // Throws std::invalid_argument unless leg in [0, 4) and k finite in
  // [0, kMaxFailureCoefficient].
  void Validate() const;

  bool operator==(const FailureSpec&) const = default;
};

// Uni{0, 1, 2, 3}.
int SampleLeg(Rng& rng);

// Uni(lower, upper); exactly `lower` when the interval is a point.
// Requires 0 <= lower <= upper <= kMaxFailureCoefficient.
double SampleK(Rng& rng, double lower, double upper);

FailureSpec SampleFailure(Rng& rng, double lower, double upper);

// Scales the broken leg's two actuator torques by k; the other six pass
// through untouched.
std::array<double, kNumActuators> ApplyFailure(
    std::span<const double, kNumActuators> torques, const FailureSpec& failure);

}  // namespace quadlab

#endif  // QUADLAB_FAILURE_H_

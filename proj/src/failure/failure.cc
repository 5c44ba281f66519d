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

#include "quadlab/failure.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace quadlab {

void FailureSpec::Validate() const {
  if (leg < 0 || leg >= kNumLegs) {
    throw std::invalid_argument("failure leg out of range: " +
                                std::to_string(leg));
  }
  if (!std::isfinite(k)) {
    throw std::invalid_argument("failure coefficient is not finite");
  }
  if (k < 0.0 || k > kMaxFailureCoefficient) {
    throw std::invalid_argument("failure coefficient outside [0, 1.5]: " +
                                std::to_string(k));
  }
}

int SampleLeg(Rng& rng) {
  // top two bits of a 64-bit draw: exactly uniform over four values
  return static_cast<int>(rng.NextU64() >> 62);
}

double SampleK(Rng& rng, double lower, double upper) {
  if (!(lower <= upper)) {
    throw std::invalid_argument("SampleK: lower bound exceeds upper bound");
  }
  if (lower < 0.0 || upper > kMaxFailureCoefficient) {
    throw std::invalid_argument("SampleK: interval outside [0, 1.5]");
  }
  if (lower == upper) return lower;
  // rounding in (upper - lower) can push the sum one ulp past upper
  return std::min(upper, lower + (upper - lower) * rng.Uniform());
}

FailureSpec SampleFailure(Rng& rng, double lower, double upper) {
  FailureSpec failure;
  failure.k = SampleK(rng, lower, upper);
  failure.leg = SampleLeg(rng);
  return failure;
}

std::array<double, kNumActuators> ApplyFailure(
    std::span<const double, kNumActuators> torques,
    const FailureSpec& failure) {
  std::array<double, kNumActuators> out;
  std::copy(torques.begin(), torques.end(), out.begin());
  out[2 * failure.leg] *= failure.k;
  out[2 * failure.leg + 1] *= failure.k;
  return out;
}

}  // namespace quadlab

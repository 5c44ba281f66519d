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

#include "quadlab/rng.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "quadlab/text_io.h"

namespace quadlab {

uint64_t MixSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(uint64_t seed) : engine_(seed) {}

Rng Rng::ForStream(uint64_t master_seed, Stream stream) {
  return Rng(MixSeed(master_seed, static_cast<uint64_t>(stream)));
}

Rng Rng::ForWorker(uint64_t master_seed, int worker_id) {
  return Rng(MixSeed(master_seed,
                     static_cast<uint64_t>(Stream::kWorkerBase) +
                         static_cast<uint64_t>(worker_id)));
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

uint64_t Rng::UniformInt(uint64_t n) {
  if (n == 0) throw std::invalid_argument("UniformInt: n must be positive");
  // rejection on the top of the range keeps the draw exactly uniform
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - U lies in (0, 1], so the log is finite
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::string Rng::Serialize() const {
  std::ostringstream out;
  out << engine_ << ' ' << (has_spare_ ? 1 : 0) << ' ' << FormatDouble(spare_);
  return out.str();
}

void Rng::Deserialize(std::string_view text) {
  std::istringstream in{std::string(text)};
  int spare_flag = 0;
  std::string spare_text;
  in >> engine_ >> spare_flag >> spare_text;
  if (in.fail()) throw std::runtime_error("malformed RNG state");
  has_spare_ = spare_flag != 0;
  spare_ = ParseDouble(spare_text);
}

bool Rng::operator==(const Rng& other) const {
  return engine_ == other.engine_ && has_spare_ == other.has_spare_ &&
         (!has_spare_ || spare_ == other.spare_);
}

}  // namespace quadlab

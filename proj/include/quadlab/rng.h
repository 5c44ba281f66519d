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

#ifndef QUADLAB_RNG_H_
#define QUADLAB_RNG_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace quadlab {

// Named streams. Every consumer of randomness derives its generator from
// (master_seed, stream id) with MixSeed, so adding draws to one stream never
// shifts another. Worker streams are kWorkerStreamBase + worker_id.
enum class Stream : uint64_t {
  kInit = 1,         // network weight initialization
  kShuffle = 2,      // minibatch permutations
  kWarmup = 3,       // random-policy threshold warmup
  kEval = 4,         // evaluation trial draws
  kWorkerBase = 1000,
};

// SplitMix64 finalizer over (seed, stream). Bijective in seed for a fixed
// stream, so distinct master seeds never collide on the same stream.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

// Portable random source. std::mt19937_64 is bit-specified by the standard;
// the distributions in <random> are not, so the floating-point and integer
// draws are implemented here.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0);

  static Rng ForStream(uint64_t master_seed, Stream stream);
  static Rng ForWorker(uint64_t master_seed, int worker_id);

  uint64_t NextU64() { return engine_(); }

  // 53-bit uniform in [0, 1).
  double Uniform();

  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);

  // Standard normal via Box-Muller; the second variate is cached.
  double Normal();

  // Text form of the full generator state, including the cached variate.
  std::string Serialize() const;
  void Deserialize(std::string_view text);

  bool operator==(const Rng& other) const;

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace quadlab

#endif  // QUADLAB_RNG_H_

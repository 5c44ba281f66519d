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

#ifndef QUADLAB_EXPERIMENT_CONFIG_H_
#define QUADLAB_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "quadlab/config_file.h"
#include "quadlab/curriculum.h"
#include "quadlab/ppo.h"
#include "quadlab/quadsim.h"

namespace quadlab {

struct TrainConfig {
  int64_t total_env_steps = 300000;
  int64_t seed = 0;
  int num_workers = 1;
  int64_t checkpoint_every = 100000;  // env steps; 0 keeps only the final one
  int log_every = 20;                 // iterations per progress line

  void ReadFrom(ConfigFile& file);  // [train] section
  void WriteTo(ConfigFile& file) const;
};

// Everything that determines a training run.
struct ExperimentConfig {
  SimConfig sim;
  PpoConfig ppo;
  CurriculumConfig curriculum;
  TrainConfig train;

  // Throws std::invalid_argument naming the first bad field.
  void Validate() const;

  void ReadFrom(ConfigFile& file);
  void WriteTo(ConfigFile& file) const;
  std::string ToString() const;

  // Curriculum config with T filled in from the step budget when unset.
  CurriculumConfig EffectiveCurriculum() const;

  // Parses every section and rejects unknown keys.
  static ExperimentConfig Parse(const std::string& text);
};

}  // namespace quadlab

#endif  // QUADLAB_EXPERIMENT_CONFIG_H_

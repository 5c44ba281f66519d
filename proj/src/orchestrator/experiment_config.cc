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

#include "quadlab/experiment_config.h"

#include <stdexcept>

namespace quadlab {

void TrainConfig::ReadFrom(ConfigFile& f) {
  const std::string s = "train";
  f.TakeInt(s, "total_env_steps", &total_env_steps);
  f.TakeInt(s, "seed", &seed);
  f.TakeInt(s, "num_workers", &num_workers);
  f.TakeInt(s, "checkpoint_every", &checkpoint_every);
  f.TakeInt(s, "log_every", &log_every);
}

void TrainConfig::WriteTo(ConfigFile& f) const {
  const std::string s = "train";
  f.Set(s, "total_env_steps", std::to_string(total_env_steps));
  f.Set(s, "seed", std::to_string(seed));
  f.Set(s, "num_workers", std::to_string(num_workers));
  f.Set(s, "checkpoint_every", std::to_string(checkpoint_every));
  f.Set(s, "log_every", std::to_string(log_every));
}

void ExperimentConfig::Validate() const {
  sim.Validate();
  ppo.Validate();
  EffectiveCurriculum().Validate();
  if (train.num_workers < 1) {
    throw std::invalid_argument("train: num_workers must be >= 1");
  }
  if (train.total_env_steps < ppo.horizon) {
    throw std::invalid_argument("train: total_env_steps must be >= horizon");
  }
  if (train.seed < 0) throw std::invalid_argument("train: seed must be >= 0");
  if (train.checkpoint_every < 0) {
    throw std::invalid_argument("train: checkpoint_every must be >= 0");
  }
  if (train.log_every < 1) {
    throw std::invalid_argument("train: log_every must be >= 1");
  }
  if (ppo.horizon * train.num_workers < ppo.minibatch_count) {
    throw std::invalid_argument("ppo: batch smaller than minibatch_count");
  }
  const CurriculumConfig c = EffectiveCurriculum();
  if (IsLinear(c.mode) && c.total_steps < c.lcdr_stages) {
    throw std::invalid_argument("curriculum: total_steps must be >= stages");
  }
}

void ExperimentConfig::ReadFrom(ConfigFile& f) {
  sim.ReadFrom(f);
  ppo.ReadFrom(f);
  curriculum.ReadFrom(f);
  train.ReadFrom(f);
}

void ExperimentConfig::WriteTo(ConfigFile& f) const {
  sim.WriteTo(f);
  ppo.WriteTo(f);
  curriculum.WriteTo(f);
  train.WriteTo(f);
}

std::string ExperimentConfig::ToString() const {
  ConfigFile f;
  WriteTo(f);
  return f.ToString();
}

CurriculumConfig ExperimentConfig::EffectiveCurriculum() const {
  CurriculumConfig c = curriculum;
  if (c.total_steps == 0) c.total_steps = train.total_env_steps;
  return c;
}

ExperimentConfig ExperimentConfig::Parse(const std::string& text) {
  ConfigFile f = ConfigFile::Parse(text);
  ExperimentConfig config;
  config.ReadFrom(f);
  f.RejectUnconsumed();
  return config;
}

}  // namespace quadlab

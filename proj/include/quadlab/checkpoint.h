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

// Plain-text checkpoint files: a version line, the effective experiment
// config, then the trainer state as key/value records with hexadecimal
// floats. Saving a loaded checkpoint reproduces the file byte for byte.

#ifndef QUADLAB_CHECKPOINT_H_
#define QUADLAB_CHECKPOINT_H_

#include <filesystem>

#include "quadlab/experiment_config.h"
#include "quadlab/ppo.h"
#include "quadlab/train.h"

namespace quadlab {

inline constexpr int kCheckpointVersion = 1;

// Written atomically (temporary file, then rename).
void SaveCheckpoint(const std::filesystem::path& path, const Trainer& trainer);

// Config stored in a checkpoint.
ExperimentConfig ReadCheckpointConfig(const std::filesystem::path& path);

// Rebuilds the trainer exactly as it was saved.
Trainer LoadCheckpoint(const std::filesystem::path& path,
                       std::ostream* progress = nullptr);

// Only the policy, for evaluation. Throws std::runtime_error when the
// file is missing or malformed.
FrozenPolicy LoadPolicy(const std::filesystem::path& path);

}  // namespace quadlab

#endif  // QUADLAB_CHECKPOINT_H_

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

// The training loop: curriculum interval -> per-episode failure draw ->
// rollout segments on every worker -> PPO update -> completed-episode
// returns back to the curriculum.

#ifndef QUADLAB_TRAIN_H_
#define QUADLAB_TRAIN_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "quadlab/curriculum.h"
#include "quadlab/experiment_config.h"
#include "quadlab/ppo.h"
#include "quadlab/quadsim.h"
#include "quadlab/rng.h"
#include "quadlab/text_io.h"

namespace quadlab {

// One row per PPO iteration.
struct RunLogRecord {
  int64_t iteration = 0;
  int64_t env_steps = 0;       // total after this iteration
  int64_t interval_steps = 0;  // clock value the interval was taken at
  double lower = 0.0;          // interval used for this iteration's episodes
  double upper = 0.0;
  double g_threshold = 0.0;    // after this iteration's returns were fed
  int episodes = 0;            // completed during this iteration
  double mean_return = 0.0;    // undiscounted, NaN when episodes == 0
  double mean_distance = 0.0;  // NaN when episodes == 0
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  double grad_norm = 0.0;

  // Bitwise on the floating-point fields, so NaN == NaN.
  bool operator==(const RunLogRecord& other) const;
};

// One row per completed training episode.
struct EpisodeRecord {
  int64_t iteration = 0;  // iteration the episode finished in
  int worker = 0;
  int leg = 0;
  double k = 1.0;
  double lower = 0.0;  // interval k was drawn from
  double upper = 0.0;
  double episode_return = 0.0;
  double distance = 0.0;
  int length = 0;

  bool operator==(const EpisodeRecord& other) const = default;
};

std::vector<std::string> RunLogHeader();
std::vector<std::string> RunLogFields(const RunLogRecord& record);
void WriteRunLogCsv(const std::filesystem::path& path,
                    const std::vector<RunLogRecord>& log);
std::vector<RunLogRecord> ReadRunLogCsv(const std::filesystem::path& path);
void WriteEpisodesCsv(const std::filesystem::path& path,
                      const std::vector<EpisodeRecord>& episodes);

// Mean return of random-policy episodes (uniform actions in [-1, 1]) with
// failures drawn from the interval. Consumes only the warmup stream.
double RandomPolicyMeanReturn(const SimConfig& sim, const Interval& interval,
                              int episodes, uint64_t master_seed);

class Trainer {
 public:
  // Measures the adaptive threshold by warmup when the config leaves it
  // unset. Warmup steps are not counted against the budget.
  // `restoring` skips the warmup; the caller must Load() a saved state.
  explicit Trainer(const ExperimentConfig& config,
                   std::ostream* progress = nullptr, bool restoring = false);
  ~Trainer();
  Trainer(Trainer&&) noexcept;
  Trainer& operator=(Trainer&&) noexcept;

  // One PPO iteration: horizon steps on every worker, then an update.
  void RunIteration();
  bool Finished() const;

  const ExperimentConfig& config() const { return config_; }
  const PpoLearner& learner() const { return learner_; }
  const Curriculum& curriculum() const { return curriculum_; }
  const std::vector<RunLogRecord>& run_log() const { return run_log_; }
  const std::vector<EpisodeRecord>& episodes() const { return episodes_; }
  int64_t env_steps() const { return env_steps_; }
  int64_t iteration() const { return iteration_; }
  int64_t returns_fed() const { return returns_fed_; }

  // Full state; a loaded trainer continues bit-identically.
  void Save(TextWriter& out) const;
  void Load(TextReader& in);

 private:
  struct Worker;

  ExperimentConfig config_;
  std::ostream* progress_;
  PpoLearner learner_;
  Curriculum curriculum_;
  Rng shuffle_rng_;
  std::vector<std::unique_ptr<Worker>> workers_;
  std::vector<RunLogRecord> run_log_;
  std::vector<EpisodeRecord> episodes_;
  int64_t env_steps_ = 0;
  int64_t iteration_ = 0;
  int64_t returns_fed_ = 0;
};

struct TrainOptions {
  // Empty: nothing is written to disk.
  std::filesystem::path output_dir;
  // Continue from this checkpoint instead of starting fresh.
  std::filesystem::path resume_from;
  // Stop (and checkpoint) once this many env steps are done; < 0 runs to
  // the configured budget.
  int64_t stop_at_env_steps = -1;
  std::ostream* progress = nullptr;
};

// Runs (or resumes) a training run. With an output directory it writes
// config.ini, run_log.csv, episodes.csv, schedule_trace.csv, periodic
// checkpoints under checkpoints/, and final.ckpt. On a fatal error the
// last checkpoint on disk is left intact and the error propagates.
Trainer Train(const ExperimentConfig& config, const TrainOptions& options);

}  // namespace quadlab

#endif  // QUADLAB_TRAIN_H_

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


// Evaluation protocols for trained policies. Every trial runs the
// deterministic policy (clamped Gaussian mean) for one episode with a
// failure drawn per condition:
//   plain    k = 1
//   broken   k ~ Uni(0, 0.5)
//   k_sweep  each k of a grid, one curve point per k
//   custom   k ~ Uni(lower, upper)
// The broken leg is redrawn uniformly for every trial.

#ifndef QUADLAB_EVALUATE_H_
#define QUADLAB_EVALUATE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "quadlab/config_file.h"
#include "quadlab/failure.h"
#include "quadlab/ppo.h"
#include "quadlab/quadsim.h"

namespace quadlab {

enum class ConditionKind { kPlain, kBroken, kKSweep, kCustom };

std::string ToString(ConditionKind kind);
ConditionKind ParseConditionKind(const std::string& name);

struct EvalCondition {
  ConditionKind kind = ConditionKind::kPlain;
  double lower = 1.0;        // custom only
  double upper = 1.0;        // custom only
  std::vector<double> grid;  // k_sweep only
  int trials = 10;
  std::vector<int64_t> seeds = {0, 1};

  static EvalCondition Plain(int trials, std::vector<int64_t> seeds);
  static EvalCondition Broken(int trials, std::vector<int64_t> seeds);
  static EvalCondition KSweep(std::vector<double> grid, int trials,
                              std::vector<int64_t> seeds);
  static EvalCondition Custom(double lower, double upper, int trials,
                              std::vector<int64_t> seeds);

  std::string name() const { return ToString(kind); }
  void Validate() const;
};

// {0.0, 0.1, ..., 1.0}.
std::vector<double> DefaultKGrid();

// Settings of the [eval] section.
struct EvalConfig {
  std::string condition = "broken";
  int trials = 10;
  std::vector<int64_t> seeds = {0, 1};
  std::vector<double> k_grid = DefaultKGrid();
  double custom_lower = 0.0;
  double custom_upper = 1.5;
  int num_workers = 1;

  // "full": 5 seeds x 100 trials; "ci": 2 seeds x 10 trials.
  void ApplyPreset(const std::string& preset);
  EvalCondition MakeCondition() const;
  void Validate() const;
  void ReadFrom(ConfigFile& file);
  void WriteTo(ConfigFile& file) const;
};

struct EpisodeResult {
  double reward = 0.0;    // undiscounted return
  double distance = 0.0;  // final torso x minus initial torso x
  int length = 0;
  bool fell = false;
};

// Runs one deterministic-policy episode; optionally records every step.
EpisodeResult RunPolicyEpisode(const FrozenPolicy& policy, Simulator& sim,
                               uint64_t reset_seed, const FailureSpec& failure,
                               std::vector<TrajectoryRow>* trajectory = nullptr);

struct TrialResult {
  std::string policy;
  std::string condition;
  int64_t seed = 0;
  int trial = 0;
  double k = 1.0;
  int leg = 0;
  double reward = 0.0;
  double distance = 0.0;
  int length = 0;
  bool fell = false;

  bool operator==(const TrialResult&) const = default;
};

// Aggregate over seeds. For k_sweep there is one row per grid value;
// otherwise k is NaN. Standard errors use the spread of per-seed means.
struct SummaryRow {
  std::string policy;
  std::string condition;
  double k = 0.0;
  double mean_reward = 0.0;
  double se_reward = 0.0;
  double mean_distance = 0.0;
  double se_distance = 0.0;
  double fall_fraction = 0.0;
  int num_seeds = 0;
};

struct EvalReport {
  std::vector<TrialResult> trials;
  std::vector<SummaryRow> summary;
};

// One trained policy per seed label; the trial draws for seed s depend
// only on (s, trial), so results do not depend on scheduling.
struct PolicyUnit {
  int64_t seed = 0;
  const FrozenPolicy* policy = nullptr;
};

EvalReport Evaluate(const std::string& policy_name,
                    const std::vector<PolicyUnit>& units, const SimConfig& sim,
                    const EvalCondition& condition, int num_workers = 1);

// Same policy under every seed of the condition.
EvalReport Evaluate(const std::string& policy_name, const FrozenPolicy& policy,
                    const SimConfig& sim, const EvalCondition& condition,
                    int num_workers = 1);

// Mean and standard error (sample std over seeds / sqrt(seeds)) per
// (policy, condition, k), in order of first appearance.
std::vector<SummaryRow> Summarize(const std::vector<TrialResult>& trials);

// Mean of xs and sample std / sqrt(n); the error is 0 when n < 2.
std::pair<double, double> MeanAndStandardError(const std::vector<double>& xs);

// Columns: policy, condition, seed, trial, k, leg, reward, distance,
// length, fell.
void WriteTrialsCsv(const std::filesystem::path& path,
                    const std::vector<TrialResult>& trials);
std::vector<TrialResult> ReadTrialsCsv(const std::filesystem::path& path);

// Columns: policy, condition, mean_reward, se_reward, mean_distance,
// se_distance, k, fall_fraction, num_seeds.
void WriteSummaryCsv(const std::filesystem::path& path,
                     const std::vector<SummaryRow>& rows);

}  // namespace quadlab

#endif  // QUADLAB_EVALUATE_H_

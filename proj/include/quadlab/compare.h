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


#ifndef QUADLAB_COMPARE_H_
#define QUADLAB_COMPARE_H_

#include <filesystem>
#include <string>
#include <vector>

#include "quadlab/evaluate.h"

namespace quadlab {

struct ComparisonRow {
  std::string condition;
  double k = 0.0;  // NaN outside k_sweep
  std::string policy;
  double mean_reward = 0.0;
  double se_reward = 0.0;
  double mean_distance = 0.0;
  double se_distance = 0.0;
  // Competition ranking within (condition, k): 1 + number of strictly
  // better policies, so equal means share a rank.
  int reward_rank = 0;
  int distance_rank = 0;
};

// One summary per policy, all covering the same (condition, k) set.
// Throws std::invalid_argument with fewer than two reports or mismatched
// conditions.
std::vector<ComparisonRow> Compare(
    const std::vector<std::vector<SummaryRow>>& reports);

// Columns: condition, k, policy, mean_reward, se_reward, mean_distance,
// se_distance, reward_rank, distance_rank.
void WriteComparisonCsv(const std::filesystem::path& path,
                        const std::vector<ComparisonRow>& rows);

// Bar charts with standard-error bars per non-sweep condition
// (reward.svg, distance.svg) and per-k curves (k_sweep_reward.svg,
// k_sweep_distance.svg) when sweeps are present. Returns written files.
std::vector<std::filesystem::path> WriteComparisonPlots(
    const std::filesystem::path& dir, const std::vector<ComparisonRow>& rows);

}  // namespace quadlab

#endif  // QUADLAB_COMPARE_H_

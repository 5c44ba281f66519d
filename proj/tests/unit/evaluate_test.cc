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


#include <cmath>
#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "quadlab/compare.h"
#include "quadlab/csv.h"
#include "quadlab/evaluate.h"

namespace quadlab {
namespace {

namespace fs = std::filesystem;

FrozenPolicy RandomPolicy(uint64_t seed) {
  PpoConfig config;
  Rng rng(seed);
  PpoLearner learner(kObservationSize, kNumActuators, config, rng);
  // non-trivial normalizer statistics
  std::vector<std::vector<double>> obs(4, std::vector<double>(kObservationSize));
  for (auto& o : obs) {
    for (double& x : o) x = rng.Normal();
  }
  learner.observation_stats().Update(obs);
  return learner.Freeze();
}

SimConfig ShortSim() {
  SimConfig sim;
  sim.horizon = 150;
  return sim;
}

TEST(EvaluateTest, PlainUsesUnitCoefficient) {
  const FrozenPolicy policy = RandomPolicy(1);
  const EvalReport r =
      Evaluate("p", policy, ShortSim(), EvalCondition::Plain(8, {0, 1}));
  ASSERT_EQ(r.trials.size(), 16u);
  std::set<int> legs;
  for (const TrialResult& t : r.trials) {
    EXPECT_EQ(t.k, 1.0);
    EXPECT_EQ(t.condition, "plain");
    legs.insert(t.leg);
  }
  EXPECT_GT(legs.size(), 1u);
  ASSERT_EQ(r.summary.size(), 1u);
  EXPECT_TRUE(std::isnan(r.summary[0].k));
  EXPECT_EQ(r.summary[0].num_seeds, 2);
}

TEST(EvaluateTest, BrokenDrawsFromZeroToHalf) {
  const FrozenPolicy policy = RandomPolicy(2);
  const EvalReport r =
      Evaluate("p", policy, ShortSim(), EvalCondition::Broken(20, {0, 1, 2}));
  ASSERT_EQ(r.trials.size(), 60u);
  for (const TrialResult& t : r.trials) {
    EXPECT_GE(t.k, 0.0);
    EXPECT_LE(t.k, 0.5);
    EXPECT_GE(t.leg, 0);
    EXPECT_LT(t.leg, kNumLegs);
  }
}

TEST(EvaluateTest, CustomIntervalIsRespected) {
  const FrozenPolicy policy = RandomPolicy(3);
  const EvalReport r = Evaluate("p", policy, ShortSim(),
                                EvalCondition::Custom(0.7, 0.9, 10, {5}));
  for (const TrialResult& t : r.trials) {
    EXPECT_GE(t.k, 0.7);
    EXPECT_LE(t.k, 0.9);
    EXPECT_EQ(t.seed, 5);
  }
}

TEST(EvaluateTest, SweepHasOnePointPerGridValue) {
  const FrozenPolicy policy = RandomPolicy(4);
  const EvalReport r = Evaluate("p", policy, ShortSim(),
                                EvalCondition::KSweep(DefaultKGrid(), 2, {0, 1}));
  ASSERT_EQ(r.summary.size(), 11u);
  for (int i = 0; i < 11; ++i) EXPECT_NEAR(r.summary[i].k, 0.1 * i, 1e-12);
  EXPECT_EQ(r.trials.size(), 11u * 2 * 2);
}

TEST(EvaluateTest, DistanceIsTheSimulatorProgress) {
  const FrozenPolicy policy = RandomPolicy(5);
  Simulator sim(ShortSim());
  for (uint64_t seed = 0; seed < 5; ++seed) {
    std::vector<TrajectoryRow> rows;
    const EpisodeResult e = RunPolicyEpisode(policy, sim, seed, {1, 0.3}, &rows);
    EXPECT_NEAR(e.distance, sim.progress(), 1e-12);
    EXPECT_NEAR(e.distance, sim.state().torso_x - sim.initial_torso_x(), 1e-12);
    EXPECT_EQ(e.length, sim.step_count());
    EXPECT_EQ(static_cast<int>(rows.size()), e.length);
    double total = 0.0;
    for (const TrajectoryRow& row : rows) total += row.reward;
    EXPECT_NEAR(e.reward, total, 1e-9);
    EXPECT_TRUE(rows.back().done);
  }
}

TEST(EvaluateTest, ReportsAreBitIdenticalAndScheduleFree) {
  const FrozenPolicy policy = RandomPolicy(6);
  const EvalCondition c = EvalCondition::Broken(6, {0, 1});
  const EvalReport a = Evaluate("p", policy, ShortSim(), c, 1);
  const EvalReport b = Evaluate("p", policy, ShortSim(), c, 1);
  const EvalReport threaded = Evaluate("p", policy, ShortSim(), c, 3);
  EXPECT_EQ(a.trials, b.trials);
  EXPECT_EQ(a.trials, threaded.trials);
}

TEST(EvaluateTest, NeverMutatesThePolicy) {
  const FrozenPolicy policy = RandomPolicy(7);
  const PolicyParams params = policy.params;
  const RunningMeanStd stats = policy.observation_stats;
  Evaluate("p", policy, ShortSim(), EvalCondition::Broken(4, {0}), 2);
  EXPECT_EQ(policy.params, params);
  EXPECT_TRUE(policy.observation_stats == stats);
}

TEST(EvaluateTest, OnePolicyPerSeedUnit) {
  const FrozenPolicy a = RandomPolicy(8), b = RandomPolicy(9);
  const EvalCondition c = EvalCondition::Plain(3, {0, 1});
  const EvalReport r = Evaluate("pair", {{0, &a}, {1, &b}}, ShortSim(), c);
  const EvalReport only_b = Evaluate("pair", b, ShortSim(), EvalCondition::Plain(3, {1}));
  std::vector<TrialResult> seed1;
  for (const TrialResult& t : r.trials) {
    if (t.seed == 1) seed1.push_back(t);
  }
  EXPECT_EQ(seed1, only_b.trials);
}

TrialResult Trial(const std::string& policy, int64_t seed, double reward,
                  double distance) {
  TrialResult t;
  t.policy = policy;
  t.condition = "broken";
  t.seed = seed;
  t.reward = reward;
  t.distance = distance;
  return t;
}

TEST(SummarizeTest, StandardErrorAcrossSeedMeans) {
  // seed means: reward 2, 5, 8; distance 1, 1, 4
  const std::vector<TrialResult> trials = {
      Trial("p", 0, 1.0, 1.0), Trial("p", 0, 3.0, 1.0), Trial("p", 1, 4.0, 0.5),
      Trial("p", 1, 6.0, 1.5), Trial("p", 2, 8.0, 4.0)};
  const std::vector<SummaryRow> rows = Summarize(trials);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(rows[0].mean_reward, 5.0);
  // sample std of {2, 5, 8} is 3
  EXPECT_NEAR(rows[0].se_reward, 3.0 / std::sqrt(3.0), 1e-12);
  EXPECT_DOUBLE_EQ(rows[0].mean_distance, 2.0);
  EXPECT_NEAR(rows[0].se_distance, std::sqrt(3.0) / std::sqrt(3.0), 1e-12);
  EXPECT_EQ(rows[0].num_seeds, 3);

  const auto [mean, se] = MeanAndStandardError({4.0});
  EXPECT_EQ(mean, 4.0);
  EXPECT_EQ(se, 0.0);
}

std::vector<SummaryRow> SyntheticSummary(const std::string& policy,
                                         double reward, double distance) {
  SummaryRow row;
  row.policy = policy;
  row.condition = "broken";
  row.k = std::nan("");
  row.mean_reward = reward;
  row.mean_distance = distance;
  row.num_seeds = 3;
  return {row};
}

TEST(CompareTest, IdenticalReportsTie) {
  const FrozenPolicy policy = RandomPolicy(10);
  const EvalCondition c = EvalCondition::Broken(3, {0, 1});
  const auto a = Evaluate("a", policy, ShortSim(), c).summary;
  auto b = Evaluate("b", policy, ShortSim(), c).summary;
  const std::vector<ComparisonRow> rows = Compare({a, b});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].mean_reward, rows[1].mean_reward);
  EXPECT_EQ(rows[0].reward_rank, 1);
  EXPECT_EQ(rows[1].reward_rank, 1);
  EXPECT_EQ(rows[0].distance_rank, 1);
  EXPECT_EQ(rows[1].distance_rank, 1);
}

TEST(CompareTest, DominantPolicyRanksFirst) {
  const auto rows = Compare({SyntheticSummary("weak", 10.0, 1.0),
                             SyntheticSummary("strong", 20.0, 3.0),
                             SyntheticSummary("mid", 15.0, 3.0)});
  for (const ComparisonRow& r : rows) {
    if (r.policy == "strong") {
      EXPECT_EQ(r.reward_rank, 1);
      EXPECT_EQ(r.distance_rank, 1);
    } else if (r.policy == "mid") {
      EXPECT_EQ(r.reward_rank, 2);
      EXPECT_EQ(r.distance_rank, 1);
    } else {
      EXPECT_EQ(r.reward_rank, 3);
      EXPECT_EQ(r.distance_rank, 3);
    }
  }
}

TEST(CompareTest, RejectsMismatchedConditions) {
  auto other = SyntheticSummary("b", 1.0, 1.0);
  other[0].condition = "plain";
  EXPECT_THROW(Compare({SyntheticSummary("a", 1.0, 1.0), other}),
               std::invalid_argument);
  EXPECT_THROW(Compare({SyntheticSummary("a", 1.0, 1.0)}), std::invalid_argument);
}

TEST(CompareTest, WritesCsvAndPlots) {
  const fs::path dir = fs::temp_directory_path() / "quadlab_compare_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto rows = Compare({SyntheticSummary("a", 1.0, 2.0),
                             SyntheticSummary("b", 3.0, 1.0)});
  WriteComparisonCsv(dir / "comparison.csv", rows);
  EXPECT_EQ(ReadCsv(dir / "comparison.csv").rows.size(), 2u);
  const auto files = WriteComparisonPlots(dir, rows);
  EXPECT_FALSE(files.empty());
  for (const fs::path& f : files) EXPECT_GT(fs::file_size(f), 0u);
  fs::remove_all(dir);
}

TEST(ReportCsvTest, TrialsRoundTrip) {
  const fs::path path = fs::temp_directory_path() / "quadlab_trials_test.csv";
  const FrozenPolicy policy = RandomPolicy(11);
  const EvalReport r = Evaluate("p", policy, ShortSim(),
                                EvalCondition::KSweep({0.0, 0.5}, 2, {0}));
  WriteTrialsCsv(path, r.trials);
  EXPECT_EQ(ReadTrialsCsv(path), r.trials);
  const CsvTable table = ReadCsv(path);
  for (const char* column : {"policy", "condition", "seed", "trial", "k", "leg",
                             "reward", "distance"}) {
    EXPECT_NO_THROW(table.Column(column)) << column;
  }
  fs::remove(path);
}

TEST(EvalConfigTest, PresetsAndValidation) {
  EvalConfig c;
  c.ApplyPreset("full");
  EXPECT_EQ(c.trials, 100);
  EXPECT_EQ(c.seeds.size(), 5u);
  c.ApplyPreset("ci");
  EXPECT_EQ(c.trials, 10);
  EXPECT_EQ(c.seeds.size(), 2u);
  EXPECT_THROW(c.ApplyPreset("huge"), std::invalid_argument);

  EXPECT_THROW(EvalCondition::KSweep({0.0, 1.6}, 2, {0}).Validate(),
               std::invalid_argument);
  EXPECT_THROW(EvalCondition::Plain(0, {0}).Validate(), std::invalid_argument);
  EXPECT_THROW(EvalCondition::Plain(1, {}).Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace quadlab

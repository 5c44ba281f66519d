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


#include "quadlab/evaluate.h"

#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>

#include "quadlab/csv.h"
#include "quadlab/rng.h"

namespace quadlab {
namespace {

template <typename T, typename Parse>
std::vector<T> ParseList(const std::string& text, Parse parse) {
  std::vector<T> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    const auto begin = item.find_first_not_of(' ');
    const auto end = item.find_last_not_of(' ');
    if (begin == std::string::npos) continue;
    out.push_back(parse(item.substr(begin, end - begin + 1)));
  }
  return out;
}

template <typename T, typename Format>
std::string JoinList(const std::vector<T>& xs, Format format) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format(xs[i]);
  }
  return out;
}

struct TrialDraw {
  int leg = 0;
  double k = 1.0;
  uint64_t reset_seed = 0;
};

// The draw for (seed, trial); for k_sweep the leg and reset seed are shared
// across grid values.
TrialDraw DrawTrial(const EvalCondition& c, int64_t seed, int trial,
                    double sweep_k) {
  Rng rng(MixSeed(MixSeed(static_cast<uint64_t>(seed),
                          static_cast<uint64_t>(Stream::kEval)),
                  static_cast<uint64_t>(trial)));
  TrialDraw d;
  d.leg = SampleLeg(rng);
  switch (c.kind) {
    case ConditionKind::kPlain:
      d.k = 1.0;
      break;
    case ConditionKind::kBroken:
      d.k = SampleK(rng, 0.0, 0.5);
      break;
    case ConditionKind::kKSweep:
      d.k = sweep_k;
      break;
    case ConditionKind::kCustom:
      d.k = SampleK(rng, c.lower, c.upper);
      break;
  }
  d.reset_seed = rng.NextU64();
  return d;
}

}  // namespace

std::string ToString(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::kPlain:
      return "plain";
    case ConditionKind::kBroken:
      return "broken";
    case ConditionKind::kKSweep:
      return "k_sweep";
    case ConditionKind::kCustom:
      return "custom";
  }
  throw std::invalid_argument("invalid condition kind");
}

ConditionKind ParseConditionKind(const std::string& name) {
  if (name == "plain") return ConditionKind::kPlain;
  if (name == "broken") return ConditionKind::kBroken;
  if (name == "k_sweep") return ConditionKind::kKSweep;
  if (name == "custom") return ConditionKind::kCustom;
  throw std::invalid_argument("unknown eval condition '" + name + "'");
}

EvalCondition EvalCondition::Plain(int trials, std::vector<int64_t> seeds) {
  EvalCondition c;
  c.kind = ConditionKind::kPlain;
  c.trials = trials;
  c.seeds = std::move(seeds);
  return c;
}

EvalCondition EvalCondition::Broken(int trials, std::vector<int64_t> seeds) {
  EvalCondition c = Plain(trials, std::move(seeds));
  c.kind = ConditionKind::kBroken;
  c.lower = 0.0;
  c.upper = 0.5;
  return c;
}

EvalCondition EvalCondition::KSweep(std::vector<double> grid, int trials,
                                    std::vector<int64_t> seeds) {
  EvalCondition c = Plain(trials, std::move(seeds));
  c.kind = ConditionKind::kKSweep;
  c.grid = std::move(grid);
  return c;
}

EvalCondition EvalCondition::Custom(double lower, double upper, int trials,
                                    std::vector<int64_t> seeds) {
  EvalCondition c = Plain(trials, std::move(seeds));
  c.kind = ConditionKind::kCustom;
  c.lower = lower;
  c.upper = upper;
  return c;
}

void EvalCondition::Validate() const {
  if (trials < 1) throw std::invalid_argument("eval: trials must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("eval: no seeds");
  if (kind == ConditionKind::kKSweep) {
    if (grid.empty()) throw std::invalid_argument("eval: empty k grid");
    for (double k : grid) {
      if (!(k >= 0.0 && k <= kMaxFailureCoefficient)) {
        throw std::invalid_argument("eval: grid value outside [0, 1.5]");
      }
    }
  }
  if (kind == ConditionKind::kCustom &&
      !(lower >= 0.0 && lower <= upper && upper <= kMaxFailureCoefficient)) {
    throw std::invalid_argument("eval: custom interval outside [0, 1.5]");
  }
}

std::vector<double> DefaultKGrid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

void EvalConfig::ApplyPreset(const std::string& preset) {
  if (preset == "full") {
    trials = 100;
    seeds = {0, 1, 2, 3, 4};
  } else if (preset == "ci") {
    trials = 10;
    seeds = {0, 1};
  } else {
    throw std::invalid_argument("unknown eval preset '" + preset + "'");
  }
}

EvalCondition EvalConfig::MakeCondition() const {
  EvalCondition c;
  switch (ParseConditionKind(condition)) {
    case ConditionKind::kPlain:
      c = EvalCondition::Plain(trials, seeds);
      break;
    case ConditionKind::kBroken:
      c = EvalCondition::Broken(trials, seeds);
      break;
    case ConditionKind::kKSweep:
      c = EvalCondition::KSweep(k_grid, trials, seeds);
      break;
    case ConditionKind::kCustom:
      c = EvalCondition::Custom(custom_lower, custom_upper, trials, seeds);
      break;
  }
  c.Validate();
  return c;
}

void EvalConfig::Validate() const {
  MakeCondition();
  if (num_workers < 1) throw std::invalid_argument("eval: num_workers < 1");
}

void EvalConfig::ReadFrom(ConfigFile& f) {
  const std::string s = "eval";
  f.TakeString(s, "condition", &condition);
  f.TakeInt(s, "trials", &trials);
  std::string text;
  f.TakeString(s, "seeds", &text);
  if (!text.empty()) {
    seeds = ParseList<int64_t>(text, [](const std::string& x) {
      return static_cast<int64_t>(std::stoll(x));
    });
  }
  text.clear();
  f.TakeString(s, "k_grid", &text);
  if (!text.empty()) {
    k_grid = ParseList<double>(
        text, [](const std::string& x) { return ParseDouble(x); });
  }
  f.TakeDouble(s, "custom_lower", &custom_lower);
  f.TakeDouble(s, "custom_upper", &custom_upper);
  f.TakeInt(s, "num_workers", &num_workers);
}

void EvalConfig::WriteTo(ConfigFile& f) const {
  const std::string s = "eval";
  f.Set(s, "condition", condition);
  f.Set(s, "trials", std::to_string(trials));
  f.Set(s, "seeds",
        JoinList(seeds, [](int64_t x) { return std::to_string(x); }));
  f.Set(s, "k_grid", JoinList(k_grid, FormatDecimal));
  f.Set(s, "custom_lower", FormatDecimal(custom_lower));
  f.Set(s, "custom_upper", FormatDecimal(custom_upper));
  f.Set(s, "num_workers", std::to_string(num_workers));
}

EpisodeResult RunPolicyEpisode(const FrozenPolicy& policy, Simulator& sim,
                               uint64_t reset_seed, const FailureSpec& failure,
                               std::vector<TrajectoryRow>* trajectory) {
  sim.Reset(reset_seed, failure);
  EpisodeResult result;
  while (!sim.done()) {
    const std::vector<double> action = policy.MeanAction(sim.Observe());
    const StepOutcome outcome = sim.Step(action);
    result.reward += outcome.reward;
    if (trajectory) {
      trajectory->push_back({sim.step_count() * sim.config().dt,
                             sim.state().torso_x, sim.state().torso_z,
                             sim.state().torso_pitch, outcome.reward,
                             outcome.done});
    }
    result.fell = outcome.info.falling;
  }
  result.distance = sim.state().torso_x - sim.initial_torso_x();
  result.length = sim.step_count();
  return result;
}

EvalReport Evaluate(const std::string& policy_name,
                    const std::vector<PolicyUnit>& units, const SimConfig& sim,
                    const EvalCondition& condition, int num_workers) {
  condition.Validate();
  if (units.empty()) throw std::invalid_argument("eval: no policies");
  if (num_workers < 1) throw std::invalid_argument("eval: num_workers < 1");
  const std::vector<double> ks = condition.kind == ConditionKind::kKSweep
                                     ? condition.grid
                                     : std::vector<double>{std::nan("")};

  // Task order fixes the output order: k, then seed, then trial.
  struct Task {
    std::size_t unit;
    double k;
    int trial;
  };
  std::vector<Task> tasks;
  for (double k : ks) {
    for (std::size_t u = 0; u < units.size(); ++u) {
      for (int t = 0; t < condition.trials; ++t) tasks.push_back({u, k, t});
    }
  }
  std::vector<TrialResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    Simulator simulator(sim);
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      const PolicyUnit& unit = units[task.unit];
      const TrialDraw draw =
          DrawTrial(condition, unit.seed, task.trial, task.k);
      const EpisodeResult episode = RunPolicyEpisode(
          *unit.policy, simulator, draw.reset_seed, {draw.leg, draw.k});
      TrialResult& r = results[i];
      r.policy = policy_name;
      r.condition = condition.name();
      r.seed = unit.seed;
      r.trial = task.trial;
      r.k = draw.k;
      r.leg = draw.leg;
      r.reward = episode.reward;
      r.distance = episode.distance;
      r.length = episode.length;
      r.fell = episode.fell;
    }
  };
  if (num_workers == 1) {
    work();
  } else {
    std::vector<std::exception_ptr> errors(num_workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < num_workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          work();
        } catch (...) {
          errors[w] = std::current_exception();
          next = tasks.size();
        }
      });
    }
    for (std::thread& t : threads) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  EvalReport report;
  report.trials = std::move(results);
  report.summary = Summarize(report.trials);
  return report;
}

EvalReport Evaluate(const std::string& policy_name, const FrozenPolicy& policy,
                    const SimConfig& sim, const EvalCondition& condition,
                    int num_workers) {
  std::vector<PolicyUnit> units;
  for (int64_t seed : condition.seeds) units.push_back({seed, &policy});
  return Evaluate(policy_name, units, sim, condition, num_workers);
}

std::pair<double, double> MeanAndStandardError(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

std::vector<SummaryRow> Summarize(const std::vector<TrialResult>& trials) {
  // Group key: policy, condition, k (bit pattern so NaN groups together).
  struct Group {
    SummaryRow row;
    std::vector<int64_t> seed_order;
    std::map<int64_t, std::pair<std::vector<double>, std::vector<double>>>
        per_seed;
    int falls = 0;
    int count = 0;
  };
  std::vector<Group> groups;
  std::map<std::tuple<std::string, std::string, uint64_t>, std::size_t> index;
  for (const TrialResult& t : trials) {
    const auto key = std::make_tuple(t.policy, t.condition,
                                     t.condition == "k_sweep"
                                         ? std::bit_cast<uint64_t>(t.k)
                                         : uint64_t{0});
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      Group g;
      g.row.policy = t.policy;
      g.row.condition = t.condition;
      g.row.k = t.condition == "k_sweep" ? t.k : std::nan("");
      groups.push_back(std::move(g));
    }
    Group& g = groups[it->second];
    if (!g.per_seed.count(t.seed)) g.seed_order.push_back(t.seed);
    g.per_seed[t.seed].first.push_back(t.reward);
    g.per_seed[t.seed].second.push_back(t.distance);
    g.falls += t.fell ? 1 : 0;
    ++g.count;
  }
  std::vector<SummaryRow> rows;
  for (Group& g : groups) {
    std::vector<double> rewards, distances;
    for (int64_t seed : g.seed_order) {
      rewards.push_back(MeanAndStandardError(g.per_seed[seed].first).first);
      distances.push_back(MeanAndStandardError(g.per_seed[seed].second).first);
    }
    std::tie(g.row.mean_reward, g.row.se_reward) =
        MeanAndStandardError(rewards);
    std::tie(g.row.mean_distance, g.row.se_distance) =
        MeanAndStandardError(distances);
    g.row.fall_fraction = static_cast<double>(g.falls) / g.count;
    g.row.num_seeds = static_cast<int>(g.seed_order.size());
    rows.push_back(g.row);
  }
  return rows;
}

void WriteTrialsCsv(const std::filesystem::path& path,
                    const std::vector<TrialResult>& trials) {
  CsvWriter csv(path, {"policy", "condition", "seed", "trial", "k", "leg",
                       "reward", "distance", "length", "fell"});
  for (const TrialResult& t : trials) {
    csv.Row({t.policy, t.condition, std::to_string(t.seed),
             std::to_string(t.trial), FormatDecimal(t.k),
             std::to_string(t.leg), FormatDecimal(t.reward),
             FormatDecimal(t.distance), std::to_string(t.length),
             t.fell ? "1" : "0"});
  }
}

std::vector<TrialResult> ReadTrialsCsv(const std::filesystem::path& path) {
  const CsvTable table = ReadCsv(path);
  const std::size_t policy = table.Column("policy");
  const std::size_t condition = table.Column("condition");
  const std::size_t seed = table.Column("seed");
  const std::size_t trial = table.Column("trial");
  const std::size_t k = table.Column("k");
  const std::size_t leg = table.Column("leg");
  const std::size_t reward = table.Column("reward");
  const std::size_t distance = table.Column("distance");
  const std::size_t length = table.Column("length");
  const std::size_t fell = table.Column("fell");
  std::vector<TrialResult> out;
  for (const auto& row : table.rows) {
    TrialResult t;
    t.policy = row[policy];
    t.condition = row[condition];
    t.seed = std::stoll(row[seed]);
    t.trial = std::stoi(row[trial]);
    t.k = ParseDouble(row[k]);
    t.leg = std::stoi(row[leg]);
    t.reward = ParseDouble(row[reward]);
    t.distance = ParseDouble(row[distance]);
    t.length = std::stoi(row[length]);
    t.fell = row[fell] == "1";
    out.push_back(std::move(t));
  }
  return out;
}

void WriteSummaryCsv(const std::filesystem::path& path,
                     const std::vector<SummaryRow>& rows) {
  CsvWriter csv(path, {"policy", "condition", "mean_reward", "se_reward",
                       "mean_distance", "se_distance", "k", "fall_fraction",
                       "num_seeds"});
  for (const SummaryRow& r : rows) {
    csv.Row({r.policy, r.condition, FormatDecimal(r.mean_reward),
             FormatDecimal(r.se_reward), FormatDecimal(r.mean_distance),
             FormatDecimal(r.se_distance),
             std::isnan(r.k) ? "" : FormatDecimal(r.k),
             FormatDecimal(r.fall_fraction), std::to_string(r.num_seeds)});
  }
}

}  // namespace quadlab

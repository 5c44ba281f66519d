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


#include "quadlab/cli.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quadlab/checkpoint.h"
#include "quadlab/compare.h"
#include "quadlab/config_file.h"
#include "quadlab/csv.h"
#include "quadlab/curriculum.h"
#include "quadlab/evaluate.h"
#include "quadlab/experiment_config.h"
#include "quadlab/svg_plot.h"
#include "quadlab/train.h"

namespace quadlab {
namespace {

// Flag values are checked after parsing; errors of this type are usage
// errors (exit 2), everything else is a runtime failure (exit 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Interval ParseIntervalFlag(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos) {
    throw UsageError("expected LO,HI but got '" + text + "'");
  }
  try {
    return {ParseDouble(text.substr(0, comma)),
            ParseDouble(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError("expected LO,HI but got '" + text + "'");
  }
}

template <typename T>
std::vector<T> ParseCommaList(const std::string& text) {
  std::vector<T> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    try {
      if constexpr (std::is_same_v<T, double>) {
        out.push_back(ParseDouble(item));
      } else {
        std::size_t used = 0;
        out.push_back(static_cast<T>(std::stoll(item, &used)));
        if (used != item.size()) throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw UsageError("bad list element '" + item + "' in '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("empty list '" + text + "'");
  return out;
}

// Applies repeated --set section.key=value overrides.
void ApplySets(const std::vector<std::string>& sets, ConfigFile& file) {
  for (const std::string& s : sets) {
    const std::size_t dot = s.find('.');
    const std::size_t eq = s.find('=');
    if (dot == std::string::npos || eq == std::string::npos || dot > eq) {
      throw UsageError("--set expects section.key=value, got '" + s + "'");
    }
    file.Set(s.substr(0, dot), s.substr(dot + 1, eq - dot - 1),
             s.substr(eq + 1));
  }
}

ConfigFile LoadConfigFile(const std::string& path,
                          const std::vector<std::string>& sets) {
  ConfigFile file = path.empty() ? ConfigFile() : ConfigFile::Load(path);
  ApplySets(sets, file);
  return file;
}

std::filesystem::path ResolveRunDirectory(const std::string& flag,
                                          const std::string& command) {
  std::filesystem::path dir =
      flag.empty() ? DefaultRunDirectory(command) : std::filesystem::path(flag);
  std::filesystem::create_directories(dir);
  return dir;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::vector<double> ReadReturns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open returns file " + path);
  std::string first;
  std::getline(in, first);
  if (first.find("return") != std::string::npos) {
    const CsvTable table = ReadCsv(path);
    const std::size_t column = table.Column("return");
    std::vector<double> out;
    for (const auto& row : table.rows) out.push_back(ParseDouble(row[column]));
    return out;
  }
  std::vector<double> out;
  if (!first.empty()) out.push_back(ParseDouble(first));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(ParseDouble(line));
  }
  return out;
}

struct TrainFlags {
  std::string config;
  std::vector<std::string> sets;
  std::string mode;
  std::optional<int64_t> seed;
  std::optional<int64_t> total_env_steps;
  std::optional<int> num_workers;
  std::optional<int64_t> checkpoint_every;
  std::string train_clamp;
  std::string output_dir;
  std::string resume;
  std::optional<int64_t> stop_at;
};

struct EvalFlags {
  std::string config;
  std::vector<std::string> sets;
  std::vector<std::string> checkpoints;
  std::string policy_name;
  std::string condition;
  std::optional<int> trials;
  std::string seeds;
  std::string k_grid;
  std::string custom_interval;
  std::string preset;
  std::optional<int> num_workers;
  std::string output_dir;
};

struct TraceFlags {
  std::string config;
  std::vector<std::string> sets;
  std::string mode;
  std::optional<int64_t> total_steps;
  std::optional<int> stages;
  std::optional<double> k_max;
  std::string train_clamp;
  std::string returns;
  std::optional<double> threshold;
  std::optional<int> buffer_size;
  std::optional<double> delta;
  std::string output;
};

struct CompareFlags {
  std::vector<std::string> reports;
  std::string output_dir;
};

struct PlotFlags {
  std::string run_dir;
  std::string schedule;
  std::string output_dir;
};

void AddModeOption(CLI::App* app, std::string* mode, bool required) {
  auto* opt = app->add_option("--mode", *mode, "curriculum mode")
                  ->check(CLI::IsMember(CurriculumModeNames()));
  if (required) opt->required();
}

// ---- train

int RunTrain(const TrainFlags& flags, std::ostream& out) {
  ExperimentConfig config;
  if (!flags.resume.empty()) {
    config = ReadCheckpointConfig(flags.resume);
  } else {
    try {
      ConfigFile file = LoadConfigFile(flags.config, flags.sets);
      config.ReadFrom(file);
      EvalConfig unused;
      unused.ReadFrom(file);
      file.RejectUnconsumed();
      if (!flags.mode.empty()) {
        config.curriculum.mode = ParseCurriculumMode(flags.mode);
      }
      if (flags.seed) config.train.seed = *flags.seed;
      if (flags.total_env_steps) {
        config.train.total_env_steps = *flags.total_env_steps;
      }
      if (flags.num_workers) config.train.num_workers = *flags.num_workers;
      if (flags.checkpoint_every) {
        config.train.checkpoint_every = *flags.checkpoint_every;
      }
      if (!flags.train_clamp.empty()) {
        config.curriculum.train_clamp = ParseIntervalFlag(flags.train_clamp);
      }
      config.Validate();
    } catch (const UsageError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }
  const std::filesystem::path dir =
      ResolveRunDirectory(flags.output_dir, "train");
  out << "run directory: " << dir.string() << '\n';
  TrainOptions options;
  options.output_dir = dir;
  options.resume_from = flags.resume;
  options.stop_at_env_steps = flags.stop_at.value_or(-1);
  options.progress = &out;
  const Trainer trainer = Train(config, options);
  out << "finished at " << trainer.env_steps() << " env steps, "
      << trainer.episodes().size() << " episodes\n";
  return kExitOk;
}

// ---- eval / sweep

EvalConfig BuildEvalConfig(const EvalFlags& flags, bool sweep) {
  EvalConfig eval;
  try {
    ConfigFile file = LoadConfigFile(flags.config, flags.sets);
    ExperimentConfig unused;
    unused.ReadFrom(file);
    eval.ReadFrom(file);
    file.RejectUnconsumed();
    if (!flags.preset.empty()) eval.ApplyPreset(flags.preset);
    if (sweep) eval.condition = "k_sweep";
    if (!flags.condition.empty()) eval.condition = flags.condition;
    if (flags.trials) eval.trials = *flags.trials;
    if (!flags.seeds.empty()) eval.seeds = ParseCommaList<int64_t>(flags.seeds);
    if (!flags.k_grid.empty()) eval.k_grid = ParseCommaList<double>(flags.k_grid);
    if (!flags.custom_interval.empty()) {
      const Interval i = ParseIntervalFlag(flags.custom_interval);
      eval.custom_lower = i.lower;
      eval.custom_upper = i.upper;
      if (flags.condition.empty()) eval.condition = "custom";
    }
    if (flags.num_workers) eval.num_workers = *flags.num_workers;
    eval.Validate();
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  return eval;
}

int RunEval(const EvalFlags& flags, bool sweep, std::ostream& out) {
  const EvalConfig eval = BuildEvalConfig(flags, sweep);
  for (const std::string& c : flags.checkpoints) {
    if (!std::filesystem::exists(c)) {
      throw std::runtime_error("missing checkpoint " + c);
    }
  }
  const ExperimentConfig trained = ReadCheckpointConfig(flags.checkpoints[0]);
  std::vector<FrozenPolicy> policies;
  std::vector<int64_t> train_seeds;
  for (const std::string& c : flags.checkpoints) {
    policies.push_back(LoadPolicy(c));
    train_seeds.push_back(ReadCheckpointConfig(c).train.seed);
  }
  const std::string name = flags.policy_name.empty()
                               ? ToString(trained.curriculum.mode)
                               : flags.policy_name;
  const EvalCondition condition = eval.MakeCondition();
  EvalReport report;
  if (policies.size() == 1) {
    report = Evaluate(name, policies[0], trained.sim, condition,
                      eval.num_workers);
  } else {
    // one trained policy per seed: the training seed labels each unit
    std::vector<PolicyUnit> units;
    for (std::size_t i = 0; i < policies.size(); ++i) {
      units.push_back({train_seeds[i], &policies[i]});
    }
    report = Evaluate(name, units, trained.sim, condition, eval.num_workers);
  }

  const std::filesystem::path dir =
      ResolveRunDirectory(flags.output_dir, sweep ? "sweep" : "eval");
  ConfigFile echo;
  eval.WriteTo(echo);
  echo.Set("eval", "policy_name", name);
  std::string joined;
  for (const std::string& c : flags.checkpoints) {
    joined += (joined.empty() ? "" : ",") + c;
  }
  echo.Set("eval", "checkpoints", joined);
  WriteText(dir / "eval_config.ini", echo.ToString());
  WriteTrialsCsv(dir / "trials.csv", report.trials);
  WriteSummaryCsv(dir / "summary.csv", report.summary);
  out << "run directory: " << dir.string() << '\n';
  for (const SummaryRow& r : report.summary) {
    char line[256];
    std::snprintf(line, sizeof(line),
                  "%s %s%s reward %.3f +- %.3f distance %.3f +- %.3f "
                  "fall %.2f",
                  r.policy.c_str(), r.condition.c_str(),
                  std::isnan(r.k) ? ""
                                  : (" k=" + FormatDecimal(r.k)).c_str(),
                  r.mean_reward, r.se_reward, r.mean_distance, r.se_distance,
                  r.fall_fraction);
    out << line << '\n';
  }
  return kExitOk;
}

// ---- schedule-trace

int RunScheduleTrace(const TraceFlags& flags, std::ostream& out) {
  CurriculumConfig config;
  try {
    ConfigFile file = LoadConfigFile(flags.config, flags.sets);
    ExperimentConfig experiment;
    experiment.ReadFrom(file);
    EvalConfig unused;
    unused.ReadFrom(file);
    file.RejectUnconsumed();
    config = experiment.EffectiveCurriculum();
    config.mode = ParseCurriculumMode(flags.mode);
    if (flags.total_steps) config.total_steps = *flags.total_steps;
    if (flags.stages) config.lcdr_stages = *flags.stages;
    if (flags.k_max) config.k_max = *flags.k_max;
    if (flags.buffer_size) config.buffer_size = *flags.buffer_size;
    if (flags.delta) config.delta_lower = config.delta_upper = *flags.delta;
    if (!flags.train_clamp.empty()) {
      config.train_clamp = ParseIntervalFlag(flags.train_clamp);
    }
    config.Validate();
    if (IsAdaptive(config.mode) && flags.returns.empty()) {
      throw UsageError("adaptive modes need --returns to replay");
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }

  std::vector<ScheduleTraceRow> rows;
  if (IsLinear(config.mode)) {
    try {
      rows = LcdrScheduleTrace(config);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else if (IsAdaptive(config.mode)) {
    const double threshold =
        flags.threshold.value_or(config.initial_threshold.value_or(0.0));
    rows = ReplayAdaptiveSchedule(config, threshold, ReadReturns(flags.returns));
  } else {
    rows = Curriculum(config, 0.0).trace();
  }
  if (flags.output.empty()) {
    out << "update_index,elapsed_steps,L,U,g_threshold\n";
    for (const ScheduleTraceRow& r : rows) {
      out << r.update_index << ',' << r.elapsed_steps << ','
          << FormatDecimal(r.lower) << ',' << FormatDecimal(r.upper) << ','
          << FormatDecimal(r.g_threshold) << '\n';
    }
  } else {
    const std::filesystem::path path(flags.output);
    if (path.has_parent_path()) {
      std::filesystem::create_directories(path.parent_path());
    }
    WriteScheduleTraceCsv(path, rows);
  }
  return kExitOk;
}

// ---- compare

int RunCompare(const CompareFlags& flags, std::ostream& out) {
  std::vector<std::vector<SummaryRow>> summaries;
  for (const std::string& path : flags.reports) {
    if (!std::filesystem::exists(path)) {
      throw std::runtime_error("missing report " + path);
    }
    summaries.push_back(Summarize(ReadTrialsCsv(path)));
  }
  const std::vector<ComparisonRow> rows = Compare(summaries);
  const std::filesystem::path dir =
      ResolveRunDirectory(flags.output_dir, "compare");
  WriteComparisonCsv(dir / "comparison.csv", rows);
  WriteComparisonPlots(dir, rows);
  out << "run directory: " << dir.string() << '\n';
  for (const ComparisonRow& r : rows) {
    out << r.condition << (std::isnan(r.k) ? "" : " k=" + FormatDecimal(r.k))
        << ' ' << r.policy << " reward_rank " << r.reward_rank
        << " distance_rank " << r.distance_rank << '\n';
  }
  return kExitOk;
}

// ---- plot

int RunPlot(const PlotFlags& flags, std::ostream& out) {
  if (flags.run_dir.empty() && flags.schedule.empty()) {
    throw UsageError("plot needs --run-dir or --schedule");
  }
  const std::filesystem::path dir = ResolveRunDirectory(
      flags.output_dir.empty() ? flags.run_dir : flags.output_dir, "plot");
  std::vector<std::string> written;
  if (!flags.run_dir.empty()) {
    const std::vector<RunLogRecord> log =
        ReadRunLogCsv(std::filesystem::path(flags.run_dir) / "run_log.csv");
    LineSeries returns{"mean return", {}, {}, {}};
    LineSeries distance{"mean distance", {}, {}, {}};
    BandSeries band{"[L, U]", {}, {}, {}};
    for (const RunLogRecord& r : log) {
      band.xs.push_back(static_cast<double>(r.interval_steps));
      band.lower.push_back(r.lower);
      band.upper.push_back(r.upper);
      if (std::isnan(r.mean_return)) continue;
      returns.xs.push_back(static_cast<double>(r.env_steps));
      returns.ys.push_back(r.mean_return);
      distance.xs.push_back(static_cast<double>(r.env_steps));
      distance.ys.push_back(r.mean_distance);
    }
    WriteLineChartSvg(dir / "learning_curve.svg",
                      {"Episode return", "env steps", "return"}, {returns});
    WriteLineChartSvg(dir / "distance_curve.svg",
                      {"Walking distance", "env steps", "distance (m)"},
                      {distance});
    WriteBandChartSvg(dir / "interval.svg",
                      {"Failure coefficient interval", "env steps", "k"},
                      {band});
    written = {"learning_curve.svg", "distance_curve.svg", "interval.svg"};
  }
  if (!flags.schedule.empty()) {
    const std::vector<ScheduleTraceRow> rows =
        ReadScheduleTraceCsv(flags.schedule);
    BandSeries band{"[L, U]", {}, {}, {}};
    for (const ScheduleTraceRow& r : rows) {
      band.xs.push_back(static_cast<double>(r.elapsed_steps));
      band.lower.push_back(r.lower);
      band.upper.push_back(r.upper);
    }
    WriteBandChartSvg(dir / "schedule.svg",
                      {"Failure coefficient schedule", "elapsed", "k"}, {band});
    written.push_back("schedule.svg");
  }
  for (const std::string& name : written) {
    out << (dir / name).string() << '\n';
  }
  return kExitOk;
}

}  // namespace

std::filesystem::path DefaultRunDirectory(const std::string& command) {
  const char* root_env = std::getenv(kOutputRootEnv);
  const std::filesystem::path root =
      root_env && *root_env ? root_env : "runs";
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &utc);
  std::filesystem::path dir = root / (command + "-" + stamp);
  for (int i = 1; std::filesystem::exists(dir); ++i) {
    dir = root / (command + "-" + stamp + "-" + std::to_string(i));
  }
  return dir;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Fault-tolerant quadruped locomotion lab", "quadlab");
  app.require_subcommand(1);

  TrainFlags train;
  CLI::App* train_cmd = app.add_subcommand("train", "train a policy");
  train_cmd->add_option("--config", train.config, "config file")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--set", train.sets, "override section.key=value");
  AddModeOption(train_cmd, &train.mode, false);
  train_cmd->add_option("--seed", train.seed, "master seed");
  train_cmd->add_option("--total-env-steps", train.total_env_steps,
                        "environment step budget");
  train_cmd->add_option("--num-workers", train.num_workers, "rollout workers");
  train_cmd->add_option("--checkpoint-every", train.checkpoint_every,
                        "env steps between checkpoints (0: final only)");
  train_cmd->add_option("--train-clamp", train.train_clamp,
                        "restrict every interval to LO,HI");
  train_cmd->add_option("--output-dir", train.output_dir, "run directory");
  train_cmd->add_option("--resume", train.resume, "checkpoint to continue")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--stop-at", train.stop_at,
                        "stop after this many env steps");

  EvalFlags eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate checkpoints");
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "evaluate checkpoints over a k grid");
  for (CLI::App* cmd : {eval_cmd, sweep_cmd}) {
    cmd->add_option("--checkpoint", eval.checkpoints,
                    "checkpoint, repeat for one policy per training seed")
        ->required();
    cmd->add_option("--config", eval.config, "config file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", eval.sets, "override section.key=value");
    cmd->add_option("--policy-name", eval.policy_name, "label in reports");
    cmd->add_option("--trials", eval.trials, "trials per seed");
    cmd->add_option("--seeds", eval.seeds, "comma-separated seeds");
    cmd->add_option("--k-grid", eval.k_grid, "comma-separated k values");
    cmd->add_option("--preset", eval.preset, "full or ci")
        ->check(CLI::IsMember({"full", "ci"}));
    cmd->add_option("--num-workers", eval.num_workers, "parallel trials");
    cmd->add_option("--output-dir", eval.output_dir, "run directory");
  }
  eval_cmd
      ->add_option("--condition", eval.condition,
                   "plain, broken, k_sweep or custom")
      ->check(CLI::IsMember({"plain", "broken", "k_sweep", "custom"}));
  eval_cmd->add_option("--custom-interval", eval.custom_interval,
                       "LO,HI for the custom condition");

  TraceFlags trace;
  CLI::App* trace_cmd = app.add_subcommand(
      "schedule-trace", "export a curriculum schedule without training");
  trace_cmd->add_option("--config", trace.config, "config file")
      ->check(CLI::ExistingFile);
  trace_cmd->add_option("--set", trace.sets, "override section.key=value");
  AddModeOption(trace_cmd, &trace.mode, true);
  trace_cmd->add_option("--total-steps", trace.total_steps, "T");
  trace_cmd->add_option("--stages", trace.stages, "N for linear schedules");
  trace_cmd->add_option("--k-max", trace.k_max, "largest k");
  trace_cmd->add_option("--train-clamp", trace.train_clamp, "LO,HI");
  trace_cmd->add_option("--returns", trace.returns,
                        "episode returns to replay (adaptive modes)")
      ->check(CLI::ExistingFile);
  trace_cmd->add_option("--threshold", trace.threshold, "initial threshold");
  trace_cmd->add_option("--buffer-size", trace.buffer_size, "m");
  trace_cmd->add_option("--delta", trace.delta, "interval step");
  trace_cmd->add_option("--output", trace.output, "CSV path (default stdout)");

  CompareFlags compare;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "rank policies from eval reports");
  compare_cmd->add_option("--report", compare.reports, "trials.csv per policy")
      ->required();
  compare_cmd->add_option("--output-dir", compare.output_dir, "run directory");

  PlotFlags plot;
  CLI::App* plot_cmd = app.add_subcommand("plot", "plot a run or schedule");
  plot_cmd->add_option("--run-dir", plot.run_dir, "training run directory")
      ->check(CLI::ExistingDirectory);
  plot_cmd->add_option("--schedule", plot.schedule, "schedule trace CSV")
      ->check(CLI::ExistingFile);
  plot_cmd->add_option("--output-dir", plot.output_dir, "where to write");

  auto usage = [&](const std::string& message) {
    err << "error: " << message << "\n\n";
    const CLI::App* active = &app;
    for (const CLI::App* sub : app.get_subcommands()) active = sub;
    err << active->help();
    return kExitUsage;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* active = &app;
    for (const CLI::App* sub : app.get_subcommands()) active = sub;
    out << active->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return usage(e.what());
  }

  try {
    if (train_cmd->parsed()) return RunTrain(train, out);
    if (eval_cmd->parsed()) return RunEval(eval, false, out);
    if (sweep_cmd->parsed()) return RunEval(eval, true, out);
    if (trace_cmd->parsed()) return RunScheduleTrace(trace, out);
    if (compare_cmd->parsed()) return RunCompare(compare, out);
    if (plot_cmd->parsed()) return RunPlot(plot, out);
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return usage("no subcommand");
}

}  // namespace quadlab

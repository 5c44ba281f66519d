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

#include "quadlab/curriculum.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "quadlab/csv.h"

namespace quadlab {
namespace {

constexpr std::array<std::pair<CurriculumMode, const char*>, 7> kModeNames = {{
    {CurriculumMode::kAcdrEasy2Hard, "acdr_e2h"},
    {CurriculumMode::kAcdrHard2Easy, "acdr_h2e"},
    {CurriculumMode::kLcdrEasy2Hard, "lcdr_e2h"},
    {CurriculumMode::kLcdrHard2Easy, "lcdr_h2e"},
    {CurriculumMode::kUdr, "udr"},
    {CurriculumMode::kFixed, "fixed"},
    {CurriculumMode::kBaseline, "baseline"},
}};

// Both ends of the restriction as "lo,hi".
std::string FormatInterval(const Interval& interval) {
  return FormatDecimal(interval.lower) + "," + FormatDecimal(interval.upper);
}

Interval ParseInterval(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos) {
    throw ConfigError("expected 'lo,hi', got '" + text + "'");
  }
  return {ParseDouble(text.substr(0, comma)),
          ParseDouble(text.substr(comma + 1))};
}

}  // namespace

std::string ToString(CurriculumMode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  throw std::invalid_argument("invalid curriculum mode");
}

CurriculumMode ParseCurriculumMode(const std::string& name) {
  for (const auto& [m, n] : kModeNames) {
    if (name == n) return m;
  }
  throw std::invalid_argument("unknown curriculum mode '" + name + "'");
}

std::vector<std::string> CurriculumModeNames() {
  std::vector<std::string> names;
  for (const auto& [m, name] : kModeNames) names.emplace_back(name);
  return names;
}

bool IsAdaptive(CurriculumMode mode) {
  return mode == CurriculumMode::kAcdrEasy2Hard ||
         mode == CurriculumMode::kAcdrHard2Easy;
}

bool IsLinear(CurriculumMode mode) {
  return mode == CurriculumMode::kLcdrEasy2Hard ||
         mode == CurriculumMode::kLcdrHard2Easy;
}

void CurriculumConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("curriculum: " + what);
  };
  if (buffer_size < 1) fail("buffer_size must be >= 1");
  if (!(delta_lower >= 0.0) || !(delta_upper >= 0.0) ||
      !std::isfinite(delta_lower) || !std::isfinite(delta_upper)) {
    fail("deltas must be finite and >= 0");
  }
  if (!(k_max > 0.0) || !std::isfinite(k_max)) fail("k_max must be > 0");
  if (!(fixed_k >= 0.0 && fixed_k <= k_max)) fail("fixed_k outside [0, k_max]");
  if (lcdr_stages < 2) fail("lcdr_stages must be >= 2");
  if (total_steps < 0) fail("total_steps must be >= 0");
  if (initial_threshold && !std::isfinite(*initial_threshold)) {
    fail("initial_threshold must be finite");
  }
  if (warmup_episodes < 1) fail("warmup_episodes must be >= 1");
  if (train_clamp) {
    if (!(train_clamp->lower >= 0.0 &&
          train_clamp->lower <= train_clamp->upper &&
          train_clamp->upper <= k_max)) {
      fail("train_clamp must satisfy 0 <= lo <= hi <= k_max");
    }
  }
}

void CurriculumConfig::ReadFrom(ConfigFile& file) {
  const std::string s = "curriculum";
  std::string mode_name = ToString(mode);
  file.TakeString(s, "mode", &mode_name);
  mode = ParseCurriculumMode(mode_name);
  file.TakeInt(s, "buffer_size", &buffer_size);
  file.TakeDouble(s, "delta_lower", &delta_lower);
  file.TakeDouble(s, "delta_upper", &delta_upper);
  file.TakeDouble(s, "k_max", &k_max);
  file.TakeDouble(s, "fixed_k", &fixed_k);
  file.TakeInt(s, "lcdr_stages", &lcdr_stages);
  file.TakeInt(s, "total_steps", &total_steps);
  std::string threshold;
  file.TakeString(s, "initial_threshold", &threshold);
  if (threshold == "warmup") {
    initial_threshold.reset();
  } else if (!threshold.empty()) {
    initial_threshold = ParseDouble(threshold);
  }
  file.TakeInt(s, "warmup_episodes", &warmup_episodes);
  std::string clamp;
  file.TakeString(s, "train_clamp", &clamp);
  if (clamp == "none") {
    train_clamp.reset();
  } else if (!clamp.empty()) {
    train_clamp = ParseInterval(clamp);
  }
}

void CurriculumConfig::WriteTo(ConfigFile& file) const {
  const std::string s = "curriculum";
  file.Set(s, "mode", ToString(mode));
  file.Set(s, "buffer_size", std::to_string(buffer_size));
  file.Set(s, "delta_lower", FormatDecimal(delta_lower));
  file.Set(s, "delta_upper", FormatDecimal(delta_upper));
  file.Set(s, "k_max", FormatDecimal(k_max));
  file.Set(s, "fixed_k", FormatDecimal(fixed_k));
  file.Set(s, "lcdr_stages", std::to_string(lcdr_stages));
  file.Set(s, "total_steps", std::to_string(total_steps));
  file.Set(s, "initial_threshold",
           initial_threshold ? FormatDecimal(*initial_threshold) : "warmup");
  file.Set(s, "warmup_episodes", std::to_string(warmup_episodes));
  file.Set(s, "train_clamp", train_clamp ? FormatInterval(*train_clamp) : "none");
}

CurriculumState InitialState(const CurriculumConfig& config,
                             double g_threshold) {
  config.Validate();
  CurriculumState state;
  state.mode = config.mode;
  state.g_threshold = g_threshold;
  state.buffer_size = config.buffer_size;
  state.delta_lower = config.delta_lower;
  state.delta_upper = config.delta_upper;
  state.k_max = config.k_max;
  state.fixed_k = config.fixed_k;
  state.lcdr_stages = config.lcdr_stages;
  state.total_steps = config.total_steps;
  state.elapsed_steps = 0;
  switch (config.mode) {
    case CurriculumMode::kAcdrEasy2Hard:
    case CurriculumMode::kLcdrEasy2Hard:
      state.lower = state.upper = config.k_max;
      break;
    case CurriculumMode::kAcdrHard2Easy:
    case CurriculumMode::kLcdrHard2Easy:
      state.lower = state.upper = 0.0;
      break;
    case CurriculumMode::kUdr:
      state.lower = 0.0;
      state.upper = config.k_max;
      break;
    case CurriculumMode::kFixed:
      state.lower = state.upper = config.fixed_k;
      break;
    case CurriculumMode::kBaseline:
      state.lower = state.upper = 1.0;
      break;
  }
  return state;
}

void UpdateEasy2Hard(CurriculumState& state) {
  state.upper = std::max(0.0, state.upper - state.delta_upper);
  state.lower = std::max(0.0, state.lower - state.delta_lower);
}

void UpdateHard2Easy(CurriculumState& state) {
  state.upper = std::min(state.k_max, state.upper + state.delta_upper);
  state.lower = std::min(state.k_max, state.lower + state.delta_lower);
}

bool RecordReturn(CurriculumState& state, double g) {
  if (!std::isfinite(g)) {
    throw std::invalid_argument("curriculum: non-finite episode return");
  }
  if (!IsAdaptive(state.mode)) return false;
  state.buffer.push_back(g);
  if (static_cast<int>(state.buffer.size()) < state.buffer_size) return false;

  double sum = 0.0;
  for (double x : state.buffer) sum += x;
  const double mean = sum / static_cast<double>(state.buffer.size());
  state.buffer.clear();
  if (!(mean >= state.g_threshold)) return false;

  const Interval before{state.lower, state.upper};
  if (state.mode == CurriculumMode::kAcdrEasy2Hard) {
    UpdateEasy2Hard(state);
  } else {
    UpdateHard2Easy(state);
  }
  state.g_threshold = mean;
  return !(Interval{state.lower, state.upper} == before);
}

Interval LcdrInterval(int64_t elapsed_steps, int64_t total_steps, int stages,
                      CurriculumMode mode, double k_max) {
  if (stages < 2) throw std::invalid_argument("lcdr: N must be >= 2");
  if (total_steps < stages) {
    throw std::invalid_argument("lcdr: T must be >= N");
  }
  if (elapsed_steps < 0 || elapsed_steps > total_steps) {
    throw std::invalid_argument("lcdr: elapsed steps outside [0, T]");
  }
  if (!IsLinear(mode)) throw std::invalid_argument("lcdr: not a linear mode");
  const int64_t stage_length = total_steps / stages;
  const int64_t stage =
      std::min<int64_t>(stages - 1, elapsed_steps / stage_length);
  const double delta = k_max / (stages - 1);
  const double k = mode == CurriculumMode::kLcdrEasy2Hard
                       ? k_max - static_cast<double>(stage) * delta
                       : static_cast<double>(stage) * delta;
  return {k, k};
}

Interval SchedulerInterval(const CurriculumState& state) {
  if (IsLinear(state.mode)) {
    return LcdrInterval(std::min(state.elapsed_steps, state.total_steps),
                        state.total_steps, state.lcdr_stages, state.mode,
                        state.k_max);
  }
  return {state.lower, state.upper};
}

Interval ApplyTrainClamp(Interval interval,
                         const std::optional<Interval>& restriction) {
  if (!restriction) return interval;
  interval.lower =
      std::clamp(interval.lower, restriction->lower, restriction->upper);
  interval.upper =
      std::clamp(interval.upper, restriction->lower, restriction->upper);
  return interval;
}

void WriteScheduleTraceCsv(const std::filesystem::path& path,
                           const std::vector<ScheduleTraceRow>& rows) {
  CsvWriter csv(path, {"update_index", "elapsed_steps", "L", "U",
                       "g_threshold"});
  for (const ScheduleTraceRow& row : rows) {
    csv.Row({std::to_string(row.update_index),
             std::to_string(row.elapsed_steps), FormatDecimal(row.lower),
             FormatDecimal(row.upper), FormatDecimal(row.g_threshold)});
  }
}

std::vector<ScheduleTraceRow> ReadScheduleTraceCsv(
    const std::filesystem::path& path) {
  const CsvTable table = ReadCsv(path);
  const std::size_t index = table.Column("update_index");
  const std::size_t elapsed = table.Column("elapsed_steps");
  const std::size_t lower = table.Column("L");
  const std::size_t upper = table.Column("U");
  const std::size_t threshold = table.Column("g_threshold");
  std::vector<ScheduleTraceRow> rows;
  for (const auto& fields : table.rows) {
    rows.push_back({std::stoll(fields[index]), std::stoll(fields[elapsed]),
                    ParseDouble(fields[lower]), ParseDouble(fields[upper]),
                    ParseDouble(fields[threshold])});
  }
  return rows;
}

Curriculum::Curriculum(const CurriculumConfig& config, double g_threshold)
    : train_clamp_(config.train_clamp),
      state_(InitialState(config, g_threshold)) {
  if (IsLinear(state_.mode)) {
    // Validates T against N up front.
    LcdrInterval(0, state_.total_steps, state_.lcdr_stages, state_.mode,
                 state_.k_max);
  }
  AppendTrace();
}

void Curriculum::AdvanceTo(int64_t elapsed_steps) {
  if (elapsed_steps < state_.elapsed_steps) {
    throw std::invalid_argument("curriculum: clock moved backwards");
  }
  const Interval before = CurrentInterval();
  state_.elapsed_steps = elapsed_steps;
  if (!(CurrentInterval() == before)) AppendTrace();
}

bool Curriculum::RecordReturn(double g) {
  const bool moved = quadlab::RecordReturn(state_, g);
  if (moved) AppendTrace();
  return moved;
}

Interval Curriculum::CurrentInterval() const {
  return ApplyTrainClamp(SchedulerInterval(state_), train_clamp_);
}

void Curriculum::AppendTrace() {
  const Interval interval = CurrentInterval();
  trace_.push_back({static_cast<int64_t>(trace_.size()), state_.elapsed_steps,
                    interval.lower, interval.upper, state_.g_threshold});
}

void Curriculum::Save(TextWriter& out) const {
  out.PutString("curriculum.mode", ToString(state_.mode));
  out.Put("curriculum.lower", state_.lower);
  out.Put("curriculum.upper", state_.upper);
  out.Put("curriculum.g_threshold", state_.g_threshold);
  out.PutVector("curriculum.buffer", state_.buffer);
  out.PutInt("curriculum.buffer_size", state_.buffer_size);
  out.Put("curriculum.delta_lower", state_.delta_lower);
  out.Put("curriculum.delta_upper", state_.delta_upper);
  out.Put("curriculum.k_max", state_.k_max);
  out.Put("curriculum.fixed_k", state_.fixed_k);
  out.PutInt("curriculum.lcdr_stages", state_.lcdr_stages);
  out.PutInt("curriculum.total_steps", state_.total_steps);
  out.PutInt("curriculum.elapsed_steps", state_.elapsed_steps);
  out.PutInt("curriculum.has_clamp", train_clamp_ ? 1 : 0);
  out.Put("curriculum.clamp_lower", train_clamp_ ? train_clamp_->lower : 0.0);
  out.Put("curriculum.clamp_upper", train_clamp_ ? train_clamp_->upper : 0.0);
  out.PutInt("curriculum.trace_rows", static_cast<int64_t>(trace_.size()));
  for (const ScheduleTraceRow& row : trace_) {
    const double fields[] = {static_cast<double>(row.update_index),
                             static_cast<double>(row.elapsed_steps), row.lower,
                             row.upper, row.g_threshold};
    out.PutVector("curriculum.trace", fields);
  }
}

void Curriculum::Load(TextReader& in) {
  CurriculumState s;
  s.mode = ParseCurriculumMode(in.GetString("curriculum.mode"));
  s.lower = in.Get("curriculum.lower");
  s.upper = in.Get("curriculum.upper");
  s.g_threshold = in.Get("curriculum.g_threshold");
  s.buffer = in.GetVector("curriculum.buffer");
  s.buffer_size = static_cast<int>(in.GetInt("curriculum.buffer_size"));
  s.delta_lower = in.Get("curriculum.delta_lower");
  s.delta_upper = in.Get("curriculum.delta_upper");
  s.k_max = in.Get("curriculum.k_max");
  s.fixed_k = in.Get("curriculum.fixed_k");
  s.lcdr_stages = static_cast<int>(in.GetInt("curriculum.lcdr_stages"));
  s.total_steps = in.GetInt("curriculum.total_steps");
  s.elapsed_steps = in.GetInt("curriculum.elapsed_steps");
  std::optional<Interval> clamp;
  const bool has_clamp = in.GetInt("curriculum.has_clamp") != 0;
  const double clamp_lower = in.Get("curriculum.clamp_lower");
  const double clamp_upper = in.Get("curriculum.clamp_upper");
  if (has_clamp) clamp = Interval{clamp_lower, clamp_upper};
  const int64_t rows = in.GetInt("curriculum.trace_rows");
  std::vector<ScheduleTraceRow> trace;
  for (int64_t i = 0; i < rows; ++i) {
    const std::vector<double> f = in.GetVector("curriculum.trace");
    if (f.size() != 5) throw std::runtime_error("curriculum: bad trace row");
    trace.push_back({static_cast<int64_t>(f[0]), static_cast<int64_t>(f[1]),
                     f[2], f[3], f[4]});
  }
  state_ = std::move(s);
  train_clamp_ = clamp;
  trace_ = std::move(trace);
}

std::vector<ScheduleTraceRow> LcdrScheduleTrace(
    const CurriculumConfig& config) {
  config.Validate();
  if (!IsLinear(config.mode)) {
    throw std::invalid_argument("lcdr trace needs lcdr_e2h or lcdr_h2e");
  }
  const int64_t stage_length = config.total_steps / config.lcdr_stages;
  std::vector<ScheduleTraceRow> rows;
  for (int i = 0; i < config.lcdr_stages; ++i) {
    const int64_t elapsed = i * stage_length;
    const Interval interval = ApplyTrainClamp(
        LcdrInterval(elapsed, config.total_steps, config.lcdr_stages,
                     config.mode, config.k_max),
        config.train_clamp);
    rows.push_back({i, elapsed, interval.lower, interval.upper, 0.0});
  }
  return rows;
}

std::vector<ScheduleTraceRow> ReplayAdaptiveSchedule(
    const CurriculumConfig& config, double g_threshold,
    const std::vector<double>& returns) {
  if (!IsAdaptive(config.mode)) {
    throw std::invalid_argument("replay needs acdr_e2h or acdr_h2e");
  }
  Curriculum curriculum(config, g_threshold);
  for (std::size_t i = 0; i < returns.size(); ++i) {
    curriculum.AdvanceTo(static_cast<int64_t>(i + 1));
    curriculum.RecordReturn(returns[i]);
  }
  return curriculum.trace();
}

}  // namespace quadlab

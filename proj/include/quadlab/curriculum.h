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

// Training distributions for the failure coefficient k. Every scheduler
// yields an interval [L, U]; each episode draws k ~ Uni(L, U).
//
//   acdr_e2h / acdr_h2e  adaptive: the interval moves by a fixed step each
//                        time the mean of the last m episode returns reaches
//                        a ratcheting threshold (down from 1.5 / up from 0).
//   lcdr_e2h / lcdr_h2e  linear: N equal time stages over the run.
//   udr                  [0, 1.5] throughout.
//   fixed                [fixed_k, fixed_k].
//   baseline             [1, 1], i.e. no failure.

#ifndef QUADLAB_CURRICULUM_H_
#define QUADLAB_CURRICULUM_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "quadlab/config_file.h"
#include "quadlab/text_io.h"

namespace quadlab {

enum class CurriculumMode {
  kAcdrEasy2Hard,
  kAcdrHard2Easy,
  kLcdrEasy2Hard,
  kLcdrHard2Easy,
  kUdr,
  kFixed,
  kBaseline,
};

// Names as used on the command line: acdr_e2h, acdr_h2e, lcdr_e2h, lcdr_h2e,
// udr, fixed, baseline.
std::string ToString(CurriculumMode mode);
CurriculumMode ParseCurriculumMode(const std::string& name);
std::vector<std::string> CurriculumModeNames();

bool IsAdaptive(CurriculumMode mode);
bool IsLinear(CurriculumMode mode);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const Interval&) const = default;
};

struct CurriculumConfig {
  CurriculumMode mode = CurriculumMode::kBaseline;
  int buffer_size = 10;  // m: returns averaged per adaptive check
  double delta_lower = 0.01;
  double delta_upper = 0.01;
  double k_max = 1.5;
  double fixed_k = 1.0;
  int lcdr_stages = 11;     // N
  int64_t total_steps = 0;  // T, set from the training budget when 0
  // Adaptive threshold before the first update. When unset, training
  // measures it as the mean return of `warmup_episodes` random-policy
  // episodes.
  std::optional<double> initial_threshold;
  int warmup_episodes = 20;
  // Optional global restriction applied to every scheduler's output.
  std::optional<Interval> train_clamp;

  void Validate() const;
  void ReadFrom(ConfigFile& file);  // [curriculum] section
  void WriteTo(ConfigFile& file) const;
};

struct CurriculumState {
  CurriculumMode mode = CurriculumMode::kBaseline;
  double lower = 1.0;
  double upper = 1.0;
  double g_threshold = 0.0;
  std::vector<double> buffer;
  int buffer_size = 10;
  double delta_lower = 0.01;
  double delta_upper = 0.01;
  double k_max = 1.5;
  double fixed_k = 1.0;
  int lcdr_stages = 11;
  int64_t total_steps = 0;
  int64_t elapsed_steps = 0;

  bool operator==(const CurriculumState&) const = default;
};

// Initial state for a config: acdr_e2h / lcdr_e2h start at [k_max, k_max],
// acdr_h2e / lcdr_h2e at [0, 0].
CurriculumState InitialState(const CurriculumConfig& config,
                             double g_threshold);

// U <- max(0, U - dU), L <- max(0, L - dL).
void UpdateEasy2Hard(CurriculumState& state);
// U <- min(k_max, U + dU), L <- min(k_max, L + dL).
void UpdateHard2Easy(CurriculumState& state);

// Appends one episode return. Once m returns are buffered, their mean g_bar
// is compared with the threshold: g_bar >= threshold moves the interval one
// step and sets threshold = g_bar. The buffer is cleared either way.
// Non-adaptive modes ignore the call. Returns true if the interval moved.
bool RecordReturn(CurriculumState& state, double g);

// Stage i = min(N - 1, elapsed / floor(T / N)); easy2hard gives
// k_max - i * k_max / (N - 1), hard2easy gives i * k_max / (N - 1).
// Throws for N < 2, T < N, or elapsed outside [0, T].
Interval LcdrInterval(int64_t elapsed_steps, int64_t total_steps, int stages,
                      CurriculumMode mode, double k_max = 1.5);

// Active scheduler interval, before any training clamp.
Interval SchedulerInterval(const CurriculumState& state);

// Clamps both ends into the restriction when one is configured.
Interval ApplyTrainClamp(Interval interval,
                         const std::optional<Interval>& restriction);

struct ScheduleTraceRow {
  int64_t update_index = 0;
  int64_t elapsed_steps = 0;
  double lower = 0.0;
  double upper = 0.0;
  double g_threshold = 0.0;

  bool operator==(const ScheduleTraceRow&) const = default;
};

// Columns: update_index, elapsed_steps, L, U, g_threshold.
void WriteScheduleTraceCsv(const std::filesystem::path& path,
                           const std::vector<ScheduleTraceRow>& rows);
std::vector<ScheduleTraceRow> ReadScheduleTraceCsv(
    const std::filesystem::path& path);

// Owns a CurriculumState for a training run and records one trace row per
// interval change (row 0 is the initial interval). Intervals reported here
// include the training clamp.
class Curriculum {
 public:
  Curriculum(const CurriculumConfig& config, double g_threshold);

  // Moves the clock; linear schedules re-evaluate their stage.
  void AdvanceTo(int64_t elapsed_steps);
  bool RecordReturn(double g);

  Interval CurrentInterval() const;
  const CurriculumState& state() const { return state_; }
  const std::vector<ScheduleTraceRow>& trace() const { return trace_; }

  void Save(TextWriter& out) const;
  void Load(TextReader& in);

 private:
  void AppendTrace();

  std::optional<Interval> train_clamp_;
  CurriculumState state_;
  std::vector<ScheduleTraceRow> trace_;
};

// Stage table of a linear schedule without training: one row per stage
// start, update_index = stage.
std::vector<ScheduleTraceRow> LcdrScheduleTrace(const CurriculumConfig& config);

// Replays an adaptive schedule over a stream of returns, one per episode;
// elapsed_steps counts episodes.
std::vector<ScheduleTraceRow> ReplayAdaptiveSchedule(
    const CurriculumConfig& config, double g_threshold,
    const std::vector<double>& returns);

}  // namespace quadlab

#endif  // QUADLAB_CURRICULUM_H_

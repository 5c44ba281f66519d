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


#include "quadlab/train.h"

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "quadlab/checkpoint.h"
#include "quadlab/csv.h"
#include "quadlab/failure.h"
#include "quadlab/gae.h"

namespace quadlab {
namespace {

bool SameBits(double a, double b) {
  return std::bit_cast<uint64_t>(a) == std::bit_cast<uint64_t>(b);
}

constexpr int kRunLogFields = 15;
constexpr int kEpisodeFields = 9;

std::vector<double> Flatten(const RunLogRecord& r) {
  return {static_cast<double>(r.iteration), static_cast<double>(r.env_steps),
          static_cast<double>(r.interval_steps), r.lower, r.upper,
          r.g_threshold, static_cast<double>(r.episodes), r.mean_return,
          r.mean_distance, r.policy_loss, r.value_loss, r.entropy,
          r.approx_kl, r.clip_fraction, r.grad_norm};
}

RunLogRecord UnflattenRunLog(const std::vector<double>& f) {
  if (f.size() != kRunLogFields) throw std::runtime_error("bad run log row");
  RunLogRecord r;
  r.iteration = static_cast<int64_t>(f[0]);
  r.env_steps = static_cast<int64_t>(f[1]);
  r.interval_steps = static_cast<int64_t>(f[2]);
  r.lower = f[3];
  r.upper = f[4];
  r.g_threshold = f[5];
  r.episodes = static_cast<int>(f[6]);
  r.mean_return = f[7];
  r.mean_distance = f[8];
  r.policy_loss = f[9];
  r.value_loss = f[10];
  r.entropy = f[11];
  r.approx_kl = f[12];
  r.clip_fraction = f[13];
  r.grad_norm = f[14];
  return r;
}

std::vector<double> Flatten(const EpisodeRecord& e) {
  return {static_cast<double>(e.iteration), static_cast<double>(e.worker),
          static_cast<double>(e.leg), e.k, e.lower, e.upper, e.episode_return,
          e.distance, static_cast<double>(e.length)};
}

EpisodeRecord UnflattenEpisode(const std::vector<double>& f) {
  if (f.size() != kEpisodeFields) throw std::runtime_error("bad episode row");
  EpisodeRecord e;
  e.iteration = static_cast<int64_t>(f[0]);
  e.worker = static_cast<int>(f[1]);
  e.leg = static_cast<int>(f[2]);
  e.k = f[3];
  e.lower = f[4];
  e.upper = f[5];
  e.episode_return = f[6];
  e.distance = f[7];
  e.length = static_cast<int>(f[8]);
  return e;
}

}  // namespace

bool RunLogRecord::operator==(const RunLogRecord& other) const {
  const std::vector<double> a = Flatten(*this);
  const std::vector<double> b = Flatten(other);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!SameBits(a[i], b[i])) return false;
  }
  return true;
}

std::vector<std::string> RunLogHeader() {
  return {"iteration",   "env_steps",   "interval_steps", "L",
          "U",           "g_threshold", "episodes",       "mean_return",
          "mean_distance", "policy_loss", "value_loss",   "entropy",
          "approx_kl",   "clip_fraction", "grad_norm"};
}

std::vector<std::string> RunLogFields(const RunLogRecord& r) {
  return {std::to_string(r.iteration),
          std::to_string(r.env_steps),
          std::to_string(r.interval_steps),
          FormatDecimal(r.lower),
          FormatDecimal(r.upper),
          FormatDecimal(r.g_threshold),
          std::to_string(r.episodes),
          FormatDecimal(r.mean_return),
          FormatDecimal(r.mean_distance),
          FormatDecimal(r.policy_loss),
          FormatDecimal(r.value_loss),
          FormatDecimal(r.entropy),
          FormatDecimal(r.approx_kl),
          FormatDecimal(r.clip_fraction),
          FormatDecimal(r.grad_norm)};
}

void WriteRunLogCsv(const std::filesystem::path& path,
                    const std::vector<RunLogRecord>& log) {
  CsvWriter csv(path, RunLogHeader());
  for (const RunLogRecord& r : log) csv.Row(RunLogFields(r));
}

std::vector<RunLogRecord> ReadRunLogCsv(const std::filesystem::path& path) {
  const CsvTable table = ReadCsv(path);
  if (table.header != RunLogHeader()) {
    throw std::runtime_error("not a run log: " + path.string());
  }
  std::vector<RunLogRecord> log;
  for (const auto& row : table.rows) {
    std::vector<double> f;
    for (const std::string& field : row) f.push_back(ParseDouble(field));
    log.push_back(UnflattenRunLog(f));
  }
  return log;
}

void WriteEpisodesCsv(const std::filesystem::path& path,
                      const std::vector<EpisodeRecord>& episodes) {
  CsvWriter csv(path, {"iteration", "worker", "leg", "k", "L", "U", "return",
                       "distance", "length"});
  for (const EpisodeRecord& e : episodes) {
    csv.Row({std::to_string(e.iteration), std::to_string(e.worker),
             std::to_string(e.leg), FormatDecimal(e.k), FormatDecimal(e.lower),
             FormatDecimal(e.upper), FormatDecimal(e.episode_return),
             FormatDecimal(e.distance), std::to_string(e.length)});
  }
}

double RandomPolicyMeanReturn(const SimConfig& sim, const Interval& interval,
                              int episodes, uint64_t master_seed) {
  if (episodes < 1) throw std::invalid_argument("warmup needs >= 1 episode");
  Rng rng = Rng::ForStream(master_seed, Stream::kWarmup);
  Simulator simulator(sim);
  double total = 0.0;
  std::array<double, kNumActuators> action{};
  for (int e = 0; e < episodes; ++e) {
    const FailureSpec failure =
        SampleFailure(rng, interval.lower, interval.upper);
    simulator.Reset(rng.NextU64(), failure);
    double episode_return = 0.0;
    while (!simulator.done()) {
      for (double& a : action) a = 2.0 * rng.Uniform() - 1.0;
      episode_return += simulator.Step(action).reward;
    }
    total += episode_return;
  }
  return total / episodes;
}

// Rollout state of one simulator. Segment buffers are refilled every
// iteration; everything else persists across iterations.
struct Trainer::Worker {
  Worker(const SimConfig& sim_config, Rng worker_rng)
      : sim(sim_config), rng(std::move(worker_rng)) {}

  void Collect(const FrozenPolicy& policy, const Interval& interval,
               int horizon, int64_t iteration, int worker_id);

  Simulator sim;
  Rng rng;
  bool needs_reset = true;
  double episode_return = 0.0;
  double discounted_return = 0.0;
  Interval episode_interval;

  // segment
  std::vector<std::vector<double>> raw_observations;
  std::vector<std::vector<double>> observations;  // normalized
  std::vector<Eigen::VectorXd> actions;           // pre-clamp samples
  std::vector<double> log_probs;
  std::vector<double> values;
  std::vector<double> rewards;
  std::vector<bool> dones;
  double bootstrap_value = 0.0;
  std::vector<EpisodeRecord> finished;
};

void Trainer::Worker::Collect(const FrozenPolicy& policy,
                              const Interval& interval, int horizon,
                              int64_t iteration, int worker_id) {
  raw_observations.clear();
  observations.clear();
  actions.clear();
  log_probs.clear();
  values.clear();
  rewards.clear();
  dones.clear();
  finished.clear();
  for (int t = 0; t < horizon; ++t) {
    if (needs_reset) {
      const FailureSpec failure =
          SampleFailure(rng, interval.lower, interval.upper);
      sim.Reset(rng.NextU64(), failure);
      episode_interval = interval;
      episode_return = 0.0;
      needs_reset = false;
    }
    const auto raw = sim.Observe();
    std::vector<double> obs = policy.Normalize(raw);
    const ActResult act = policy.networks.Act(policy.params, obs, rng);
    const StepOutcome outcome = sim.Step(std::span<const double>(
        act.action.data(), static_cast<std::size_t>(act.action.size())));

    raw_observations.emplace_back(raw.begin(), raw.end());
    observations.push_back(std::move(obs));
    actions.push_back(act.raw_action);
    log_probs.push_back(act.log_prob);
    values.push_back(act.value);
    rewards.push_back(outcome.reward);
    dones.push_back(outcome.done);

    episode_return += outcome.reward;
    if (outcome.done) {
      EpisodeRecord record;
      record.iteration = iteration;
      record.worker = worker_id;
      record.leg = sim.failure().leg;
      record.k = sim.failure().k;
      record.lower = episode_interval.lower;
      record.upper = episode_interval.upper;
      record.episode_return = episode_return;
      record.distance = sim.progress();
      record.length = sim.step_count();
      finished.push_back(record);
      needs_reset = true;
    }
  }
  bootstrap_value = 0.0;
  if (!needs_reset) {
    bootstrap_value =
        policy.networks.Value(policy.params, policy.Normalize(sim.Observe()));
  }
}

namespace {

PpoLearner MakeLearner(const ExperimentConfig& config) {
  config.Validate();
  Rng init = Rng::ForStream(static_cast<uint64_t>(config.train.seed),
                            Stream::kInit);
  return PpoLearner(kObservationSize, kNumActuators, config.ppo, init);
}

Curriculum MakeCurriculum(const ExperimentConfig& config, bool restoring) {
  const CurriculumConfig c = config.EffectiveCurriculum();
  double threshold = 0.0;
  if (IsAdaptive(c.mode) && !restoring) {
    if (c.initial_threshold) {
      threshold = *c.initial_threshold;
    } else {
      // threshold measured at the schedule's starting difficulty
      const Interval start = Curriculum(c, 0.0).CurrentInterval();
      threshold =
          RandomPolicyMeanReturn(config.sim, start, c.warmup_episodes,
                                 static_cast<uint64_t>(config.train.seed));
    }
  }
  return Curriculum(c, threshold);
}

}  // namespace

Trainer::Trainer(const ExperimentConfig& config, std::ostream* progress,
                 bool restoring)
    : config_(config),
      progress_(progress),
      learner_(MakeLearner(config)),
      curriculum_(MakeCurriculum(config, restoring)),
      shuffle_rng_(Rng::ForStream(static_cast<uint64_t>(config.train.seed),
                                  Stream::kShuffle)) {
  for (int w = 0; w < config_.train.num_workers; ++w) {
    workers_.push_back(std::make_unique<Worker>(
        config_.sim,
        Rng::ForWorker(static_cast<uint64_t>(config_.train.seed), w)));
  }
}

Trainer::~Trainer() = default;
Trainer::Trainer(Trainer&&) noexcept = default;
Trainer& Trainer::operator=(Trainer&&) noexcept = default;

bool Trainer::Finished() const {
  return env_steps_ >= config_.train.total_env_steps;
}

void Trainer::RunIteration() {
  if (Finished()) throw std::logic_error("training budget already spent");
  const int horizon = config_.ppo.horizon;
  const int num_workers = static_cast<int>(workers_.size());

  curriculum_.AdvanceTo(env_steps_);
  const Interval interval = curriculum_.CurrentInterval();
  const FrozenPolicy policy = learner_.Freeze();

  // Rollouts. Each worker touches only its own state; the join below is
  // the barrier.
  if (num_workers == 1) {
    workers_[0]->Collect(policy, interval, horizon, iteration_, 0);
  } else {
    std::vector<std::exception_ptr> errors(num_workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < num_workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          workers_[w]->Collect(policy, interval, horizon, iteration_, w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (std::thread& t : threads) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  // Reward scaling statistics, in worker order.
  const double gamma = config_.ppo.gamma;
  std::vector<double> discounted;
  for (auto& worker : workers_) {
    for (int t = 0; t < horizon; ++t) {
      worker->discounted_return =
          worker->discounted_return * gamma + worker->rewards[t];
      discounted.push_back(worker->discounted_return);
      if (worker->dones[t]) worker->discounted_return = 0.0;
    }
  }
  double reward_scale = 1.0;
  if (config_.ppo.scale_rewards) {
    learner_.return_stats().Update(discounted);
    reward_scale = 1.0 / std::sqrt(learner_.return_stats().var()[0] + 1e-8);
  }

  const int n = horizon * num_workers;
  PpoBatch batch;
  batch.observations.resize(kObservationSize, n);
  batch.actions.resize(kNumActuators, n);
  batch.log_probs.resize(n);
  batch.advantages.resize(n);
  batch.returns.resize(n);
  std::vector<std::vector<double>> raw_observations;
  raw_observations.reserve(n);
  int column = 0;
  for (auto& worker : workers_) {
    std::vector<double> scaled(worker->rewards);
    for (double& r : scaled) r *= reward_scale;
    const auto dones = std::make_unique<bool[]>(horizon);
    for (int t = 0; t < horizon; ++t) dones[t] = worker->dones[t];
    const GaeResult gae = ComputeGae(
        scaled, worker->values,
        std::span<const bool>(dones.get(), static_cast<std::size_t>(horizon)),
        worker->bootstrap_value, gamma, config_.ppo.gae_lambda);
    for (int t = 0; t < horizon; ++t, ++column) {
      batch.observations.col(column) = Eigen::Map<const Eigen::VectorXd>(
          worker->observations[t].data(), kObservationSize);
      batch.actions.col(column) = worker->actions[t];
      batch.log_probs[column] = worker->log_probs[t];
      batch.advantages[column] = gae.advantages[t];
      batch.returns[column] = gae.returns[t];
      raw_observations.push_back(std::move(worker->raw_observations[t]));
    }
  }
  if (config_.ppo.normalize_observations) {
    learner_.observation_stats().Update(raw_observations);
  }

  const UpdateDiagnostics diag = learner_.Update(std::move(batch), shuffle_rng_);

  RunLogRecord record;
  record.iteration = iteration_;
  record.interval_steps = env_steps_;
  env_steps_ += n;
  record.env_steps = env_steps_;
  record.lower = interval.lower;
  record.upper = interval.upper;

  // Completed episodes feed the curriculum in worker order.
  double return_sum = 0.0;
  double distance_sum = 0.0;
  int completed = 0;
  for (auto& worker : workers_) {
    for (const EpisodeRecord& e : worker->finished) {
      curriculum_.RecordReturn(e.episode_return);
      ++returns_fed_;
      return_sum += e.episode_return;
      distance_sum += e.distance;
      ++completed;
      episodes_.push_back(e);
    }
  }
  record.g_threshold = curriculum_.state().g_threshold;
  record.episodes = completed;
  record.mean_return = completed ? return_sum / completed : std::nan("");
  record.mean_distance = completed ? distance_sum / completed : std::nan("");
  record.policy_loss = diag.policy_loss;
  record.value_loss = diag.value_loss;
  record.entropy = diag.entropy;
  record.approx_kl = diag.approx_kl;
  record.clip_fraction = diag.clip_fraction;
  record.grad_norm = diag.grad_norm;
  run_log_.push_back(record);
  ++iteration_;

  if (progress_ && (iteration_ % config_.train.log_every == 0 || Finished())) {
    char line[256];
    std::snprintf(line, sizeof(line),
                  "iter %lld steps %lld k=[%.3f, %.3f] g_th=%.2f "
                  "episodes=%d return=%.2f distance=%.3f kl=%.4f",
                  static_cast<long long>(iteration_),
                  static_cast<long long>(env_steps_), interval.lower,
                  interval.upper, record.g_threshold, completed,
                  record.mean_return, record.mean_distance, diag.approx_kl);
    *progress_ << line << '\n' << std::flush;
  }
}

void Trainer::Save(TextWriter& out) const {
  learner_.Save(out);
  curriculum_.Save(out);
  out.PutInt("trainer.env_steps", env_steps_);
  out.PutInt("trainer.iteration", iteration_);
  out.PutInt("trainer.returns_fed", returns_fed_);
  out.PutString("trainer.shuffle_rng", shuffle_rng_.Serialize());
  out.PutInt("trainer.workers", static_cast<int64_t>(workers_.size()));
  for (const auto& w : workers_) {
    out.PutString("worker.rng", w->rng.Serialize());
    out.PutInt("worker.needs_reset", w->needs_reset ? 1 : 0);
    out.Put("worker.episode_return", w->episode_return);
    out.Put("worker.discounted_return", w->discounted_return);
    out.Put("worker.interval_lower", w->episode_interval.lower);
    out.Put("worker.interval_upper", w->episode_interval.upper);
    w->sim.SaveState(out);
  }
  out.PutInt("trainer.run_log", static_cast<int64_t>(run_log_.size()));
  for (const RunLogRecord& r : run_log_) out.PutVector("log", Flatten(r));
  out.PutInt("trainer.episodes", static_cast<int64_t>(episodes_.size()));
  for (const EpisodeRecord& e : episodes_) out.PutVector("ep", Flatten(e));
}

void Trainer::Load(TextReader& in) {
  learner_.Load(in);
  curriculum_.Load(in);
  env_steps_ = in.GetInt("trainer.env_steps");
  iteration_ = in.GetInt("trainer.iteration");
  returns_fed_ = in.GetInt("trainer.returns_fed");
  shuffle_rng_.Deserialize(in.GetString("trainer.shuffle_rng"));
  if (in.GetInt("trainer.workers") != static_cast<int64_t>(workers_.size())) {
    throw std::runtime_error("checkpoint worker count does not match config");
  }
  for (auto& w : workers_) {
    w->rng.Deserialize(in.GetString("worker.rng"));
    w->needs_reset = in.GetInt("worker.needs_reset") != 0;
    w->episode_return = in.Get("worker.episode_return");
    w->discounted_return = in.Get("worker.discounted_return");
    w->episode_interval.lower = in.Get("worker.interval_lower");
    w->episode_interval.upper = in.Get("worker.interval_upper");
    w->sim.LoadState(in);
  }
  run_log_.clear();
  const int64_t rows = in.GetInt("trainer.run_log");
  for (int64_t i = 0; i < rows; ++i) {
    run_log_.push_back(UnflattenRunLog(in.GetVector("log")));
  }
  episodes_.clear();
  const int64_t count = in.GetInt("trainer.episodes");
  for (int64_t i = 0; i < count; ++i) {
    episodes_.push_back(UnflattenEpisode(in.GetVector("ep")));
  }
}

Trainer Train(const ExperimentConfig& config, const TrainOptions& options) {
  Trainer trainer = options.resume_from.empty()
                        ? Trainer(config, options.progress)
                        : LoadCheckpoint(options.resume_from, options.progress);
  if (trainer.config().ToString() != config.ToString()) {
    throw std::invalid_argument(
        "checkpoint was written with a different config");
  }
  const bool write = !options.output_dir.empty();
  const std::filesystem::path dir = options.output_dir;
  std::unique_ptr<CsvWriter> log_csv;
  if (write) {
    std::filesystem::create_directories(dir / "checkpoints");
    {
      std::ofstream out(dir / "config.ini");
      out << config.ToString();
      if (!out) throw std::runtime_error("cannot write config.ini");
    }
    log_csv = std::make_unique<CsvWriter>(dir / "run_log.csv", RunLogHeader());
    for (const RunLogRecord& r : trainer.run_log()) log_csv->Row(RunLogFields(r));
    log_csv->Flush();
  }
  auto checkpoint_path = [&](int64_t steps) {
    char name[64];
    std::snprintf(name, sizeof(name), "step_%010lld.ckpt",
                  static_cast<long long>(steps));
    return dir / "checkpoints" / name;
  };

  const int64_t every = config.train.checkpoint_every;
  int64_t last_checkpoint = trainer.env_steps();
  while (!trainer.Finished() && (options.stop_at_env_steps < 0 ||
                                 trainer.env_steps() <
                                     options.stop_at_env_steps)) {
    const int64_t before = trainer.env_steps();
    trainer.RunIteration();
    if (!write) continue;
    log_csv->Row(RunLogFields(trainer.run_log().back()));
    log_csv->Flush();
    if (every > 0 && trainer.env_steps() / every > before / every) {
      SaveCheckpoint(checkpoint_path(trainer.env_steps()), trainer);
      last_checkpoint = trainer.env_steps();
    }
  }
  if (write) {
    if (last_checkpoint != trainer.env_steps()) {
      SaveCheckpoint(checkpoint_path(trainer.env_steps()), trainer);
    }
    if (trainer.Finished()) SaveCheckpoint(dir / "final.ckpt", trainer);
    WriteEpisodesCsv(dir / "episodes.csv", trainer.episodes());
    WriteScheduleTraceCsv(dir / "schedule_trace.csv",
                          trainer.curriculum().trace());
  }
  return trainer;
}

}  // namespace quadlab

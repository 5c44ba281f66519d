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

#include "quadlab/ppo.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace quadlab {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 log(2 pi)

void Require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("PpoConfig: " + what);
}

Eigen::MatrixXd ColumnFromSpan(std::span<const double> x, int expected) {
  if (static_cast<int>(x.size()) != expected) {
    throw std::invalid_argument("observation width mismatch");
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("non-finite observation");
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(x.data(), expected);
}

std::span<const double> AsSpan(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

Eigen::VectorXd ReadVector(TextReader& in, const std::string& key) {
  const std::vector<double> v = in.GetVector(key);
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void PpoConfig::Validate() const {
  Require(learning_rate > 0.0 && std::isfinite(learning_rate),
          "learning_rate must be positive");
  Require(horizon >= 1, "horizon must be >= 1");
  Require(minibatch_count >= 1, "minibatch_count must be >= 1");
  Require(epochs >= 1, "epochs must be >= 1");
  Require(clip_epsilon > 0.0, "clip_epsilon must be positive");
  Require(gamma >= 0.0 && gamma <= 1.0, "gamma must be in [0, 1]");
  Require(gae_lambda >= 0.0 && gae_lambda <= 1.0,
          "gae_lambda must be in [0, 1]");
  Require(vf_coef >= 0.0 && entropy_coef >= 0.0,
          "loss coefficients must be non-negative");
  Require(hidden_size >= 1, "hidden_size must be >= 1");
  Require(log_std_init >= kLogStdMin && log_std_init <= kLogStdMax,
          "log_std_init outside [-5, 2]");
  Require(adam_epsilon > 0.0, "adam_epsilon must be positive");
  Require(observation_clip > 0.0, "observation_clip must be positive");
}

void PpoConfig::ReadFrom(ConfigFile& f) {
  const std::string s = "ppo";
  f.TakeDouble(s, "learning_rate", &learning_rate);
  f.TakeInt(s, "horizon", &horizon);
  f.TakeInt(s, "minibatch_count", &minibatch_count);
  f.TakeInt(s, "epochs", &epochs);
  f.TakeDouble(s, "clip_epsilon", &clip_epsilon);
  f.TakeDouble(s, "gamma", &gamma);
  f.TakeDouble(s, "gae_lambda", &gae_lambda);
  f.TakeDouble(s, "vf_coef", &vf_coef);
  f.TakeDouble(s, "entropy_coef", &entropy_coef);
  f.TakeInt(s, "hidden_size", &hidden_size);
  f.TakeDouble(s, "log_std_init", &log_std_init);
  f.TakeDouble(s, "adam_epsilon", &adam_epsilon);
  f.TakeDouble(s, "max_grad_norm", &max_grad_norm);
  f.TakeBool(s, "normalize_observations", &normalize_observations);
  f.TakeDouble(s, "observation_clip", &observation_clip);
  f.TakeBool(s, "scale_rewards", &scale_rewards);
}

void PpoConfig::WriteTo(ConfigFile& f) const {
  const std::string s = "ppo";
  auto put = [&](const char* key, double v) { f.Set(s, key, FormatDecimal(v)); };
  auto put_int = [&](const char* key, int v) {
    f.Set(s, key, std::to_string(v));
  };
  auto put_bool = [&](const char* key, bool v) {
    f.Set(s, key, v ? "true" : "false");
  };
  put("learning_rate", learning_rate);
  put_int("horizon", horizon);
  put_int("minibatch_count", minibatch_count);
  put_int("epochs", epochs);
  put("clip_epsilon", clip_epsilon);
  put("gamma", gamma);
  put("gae_lambda", gae_lambda);
  put("vf_coef", vf_coef);
  put("entropy_coef", entropy_coef);
  put_int("hidden_size", hidden_size);
  put("log_std_init", log_std_init);
  put("adam_epsilon", adam_epsilon);
  put("max_grad_norm", max_grad_norm);
  put_bool("normalize_observations", normalize_observations);
  put("observation_clip", observation_clip);
  put_bool("scale_rewards", scale_rewards);
}

bool PolicyParams::AllFinite() const {
  return actor.allFinite() && log_std.allFinite() && critic.allFinite();
}

double PolicyParams::SquaredNorm() const {
  return actor.squaredNorm() + log_std.squaredNorm() + critic.squaredNorm();
}

void PolicyParams::SetZeroLike(const PolicyParams& other) {
  actor = Eigen::VectorXd::Zero(other.actor.size());
  log_std = Eigen::VectorXd::Zero(other.log_std.size());
  critic = Eigen::VectorXd::Zero(other.critic.size());
}

bool PolicyParams::operator==(const PolicyParams& other) const {
  return actor.size() == other.actor.size() &&
         log_std.size() == other.log_std.size() &&
         critic.size() == other.critic.size() && actor == other.actor &&
         log_std == other.log_std && critic == other.critic;
}

PpoBatch PpoBatch::Select(std::span<const int> columns) const {
  const int n = static_cast<int>(columns.size());
  PpoBatch out;
  out.observations.resize(observations.rows(), n);
  out.actions.resize(actions.rows(), n);
  out.log_probs.resize(n);
  out.advantages.resize(n);
  out.returns.resize(n);
  for (int i = 0; i < n; ++i) {
    const int c = columns[i];
    out.observations.col(i) = observations.col(c);
    out.actions.col(i) = actions.col(c);
    out.log_probs[i] = log_probs[c];
    out.advantages[i] = advantages[c];
    out.returns[i] = returns[c];
  }
  return out;
}

double GaussianLogProb(const Eigen::VectorXd& mean,
                       const Eigen::VectorXd& log_std,
                       const Eigen::VectorXd& x) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < mean.size(); ++j) {
    const double z = (x[j] - mean[j]) / std::exp(log_std[j]);
    sum += -0.5 * z * z - log_std[j] - kHalfLog2Pi;
  }
  return sum;
}

double GaussianEntropy(const Eigen::VectorXd& log_std) {
  return log_std.sum() + static_cast<double>(log_std.size()) * (0.5 + kHalfLog2Pi);
}

PolicyNetworks::PolicyNetworks(int observation_size, int action_size,
                               int hidden_size)
    : actor_({observation_size, hidden_size, hidden_size, action_size}),
      critic_({observation_size, hidden_size, hidden_size, 1}) {}

PolicyParams PolicyNetworks::Init(double log_std_init, Rng& rng) const {
  PolicyParams p;
  p.actor = actor_.InitOrthogonal(std::numbers::sqrt2, 0.01, rng);
  p.log_std = Eigen::VectorXd::Constant(action_size(), log_std_init);
  p.critic = critic_.InitOrthogonal(std::numbers::sqrt2, 1.0, rng);
  return p;
}

Eigen::VectorXd PolicyNetworks::Mean(const PolicyParams& params,
                                     std::span<const double> obs) const {
  Eigen::VectorXd mean =
      actor_.Forward(params.actor, ColumnFromSpan(obs, observation_size()));
  if (!mean.allFinite()) {
    throw TrainingDivergence("policy network produced a non-finite mean");
  }
  return mean;
}

double PolicyNetworks::Value(const PolicyParams& params,
                             std::span<const double> obs) const {
  const double v = critic_.Forward(params.critic,
                                   ColumnFromSpan(obs, observation_size()))(0, 0);
  if (!std::isfinite(v)) {
    throw TrainingDivergence("value network produced a non-finite value");
  }
  return v;
}

ActResult PolicyNetworks::Act(const PolicyParams& params,
                              std::span<const double> obs, Rng& rng) const {
  ActResult out;
  const Eigen::VectorXd mean = Mean(params, obs);
  out.raw_action.resize(mean.size());
  for (Eigen::Index j = 0; j < mean.size(); ++j) {
    out.raw_action[j] = mean[j] + std::exp(params.log_std[j]) * rng.Normal();
  }
  out.action = out.raw_action.cwiseMax(-1.0).cwiseMin(1.0);
  out.log_prob = GaussianLogProb(mean, params.log_std, out.raw_action);
  out.value = Value(params, obs);
  return out;
}

LossTerms PolicyNetworks::Loss(const PolicyParams& params,
                               const PpoBatch& batch, const PpoConfig& config,
                               PolicyParams* grad) const {
  const int n = batch.size();
  if (n < 1) throw std::invalid_argument("Loss: empty batch");
  const double inv_n = 1.0 / n;
  const double eps = config.clip_epsilon;

  Mlp::Cache actor_cache, critic_cache;
  const Eigen::MatrixXd mean = actor_.Forward(
      params.actor, batch.observations, grad ? &actor_cache : nullptr);
  const Eigen::MatrixXd value = critic_.Forward(
      params.critic, batch.observations, grad ? &critic_cache : nullptr);
  const Eigen::VectorXd inv_std = (-params.log_std).array().exp();

  LossTerms terms;
  Eigen::MatrixXd grad_mean(mean.rows(), n);
  Eigen::VectorXd grad_log_std = Eigen::VectorXd::Zero(params.log_std.size());
  Eigen::MatrixXd grad_value(1, n);
  const double log_std_sum = params.log_std.sum();

  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd z =
        (batch.actions.col(i) - mean.col(i)).cwiseProduct(inv_std);
    const double log_prob = -0.5 * z.squaredNorm() - log_std_sum -
                            kHalfLog2Pi * static_cast<double>(z.size());
    const double log_ratio = log_prob - batch.log_probs[i];
    const double ratio = std::exp(log_ratio);
    const double a = batch.advantages[i];
    const double unclipped = ratio * a;
    const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps) * a;
    terms.policy_loss -= std::min(unclipped, clipped) * inv_n;
    terms.approx_kl += ((ratio - 1.0) - log_ratio) * inv_n;
    if (std::abs(ratio - 1.0) > eps) terms.clip_fraction += inv_n;

    const double residual = value(0, i) - batch.returns[i];
    terms.value_loss += residual * residual * inv_n;

    // d(loss)/d(log_prob): the unclipped branch is the one that carries
    // gradient whenever it is the minimum
    const double dlogp = unclipped <= clipped ? -unclipped * inv_n : 0.0;
    grad_mean.col(i) = dlogp * z.cwiseProduct(inv_std);
    grad_log_std += dlogp * (z.cwiseAbs2().array() - 1.0).matrix();
    grad_value(0, i) = config.vf_coef * 2.0 * residual * inv_n;
  }
  terms.entropy = GaussianEntropy(params.log_std);
  terms.total = terms.policy_loss + config.vf_coef * terms.value_loss -
                config.entropy_coef * terms.entropy;

  if (grad) {
    grad->SetZeroLike(params);
    actor_.Backward(params.actor, actor_cache, grad_mean, &grad->actor);
    critic_.Backward(params.critic, critic_cache, grad_value, &grad->critic);
    grad->log_std = grad_log_std.array() - config.entropy_coef;
  }
  return terms;
}

void NormalizeAdvantages(Eigen::VectorXd& advantages) {
  const Eigen::Index n = advantages.size();
  if (n < 2) return;
  const double mean = advantages.mean();
  advantages.array() -= mean;
  const double std = std::sqrt(advantages.squaredNorm() / static_cast<double>(n));
  advantages /= std + 1e-8;
}

std::vector<int> Permutation(int n, Rng& rng) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.UniformInt(static_cast<uint64_t>(i) + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

std::vector<double> FrozenPolicy::Normalize(
    std::span<const double> raw_obs) const {
  std::vector<double> x(raw_obs.begin(), raw_obs.end());
  if (normalize_observations) {
    NormalizeInPlace(observation_stats, observation_clip, x);
  }
  return x;
}

std::vector<double> FrozenPolicy::MeanAction(
    std::span<const double> raw_obs) const {
  const Eigen::VectorXd mean = networks.Mean(params, Normalize(raw_obs));
  std::vector<double> action(mean.size());
  for (Eigen::Index j = 0; j < mean.size(); ++j) {
    action[j] = std::clamp(mean[j], -1.0, 1.0);
  }
  return action;
}

PpoLearner::PpoLearner(int observation_size, int action_size,
                       const PpoConfig& config, Rng& init_rng)
    : config_(config),
      networks_(observation_size, action_size, config.hidden_size),
      observation_stats_(observation_size),
      return_stats_(1) {
  config_.Validate();
  params_ = networks_.Init(config_.log_std_init, init_rng);
  const AdamConfig adam{.learning_rate = config_.learning_rate,
                        .epsilon = config_.adam_epsilon};
  actor_adam_ = Adam(static_cast<int>(params_.actor.size()), adam);
  log_std_adam_ = Adam(static_cast<int>(params_.log_std.size()), adam);
  critic_adam_ = Adam(static_cast<int>(params_.critic.size()), adam);
}

FrozenPolicy PpoLearner::Freeze() const {
  return FrozenPolicy{networks_, params_, observation_stats_,
                      config_.normalize_observations,
                      config_.observation_clip};
}

void PpoLearner::ApplyGradient(PolicyParams grad, UpdateDiagnostics* diag) {
  const double norm = std::sqrt(grad.SquaredNorm());
  diag->grad_norm += norm;
  if (config_.max_grad_norm > 0.0 && norm > config_.max_grad_norm) {
    const double scale = config_.max_grad_norm / norm;
    grad.actor *= scale;
    grad.log_std *= scale;
    grad.critic *= scale;
  }
  actor_adam_.Step(grad.actor, &params_.actor);
  log_std_adam_.Step(grad.log_std, &params_.log_std);
  critic_adam_.Step(grad.critic, &params_.critic);
  params_.log_std = params_.log_std.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
}

UpdateDiagnostics PpoLearner::Update(PpoBatch batch, Rng& shuffle_rng) {
  const int n = batch.size();
  if (n < config_.minibatch_count) {
    throw std::invalid_argument("PPO update: fewer samples than minibatches");
  }
  NormalizeAdvantages(batch.advantages);
  // restored if any minibatch diverges
  const PolicyParams params_before = params_;
  const Adam actor_adam_before = actor_adam_;
  const Adam log_std_adam_before = log_std_adam_;
  const Adam critic_adam_before = critic_adam_;
  auto diverged = [&](const std::string& message) {
    params_ = params_before;
    actor_adam_ = actor_adam_before;
    log_std_adam_ = log_std_adam_before;
    critic_adam_ = critic_adam_before;
    return TrainingDivergence(message);
  };
  UpdateDiagnostics diag;
  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    const std::vector<int> order = Permutation(n, shuffle_rng);
    for (int k = 0; k < config_.minibatch_count; ++k) {
      // near-equal contiguous slices of the permutation
      const int begin = static_cast<int>(static_cast<int64_t>(n) * k /
                                         config_.minibatch_count);
      const int end = static_cast<int>(static_cast<int64_t>(n) * (k + 1) /
                                       config_.minibatch_count);
      const PpoBatch mb = batch.Select(
          std::span<const int>(order.data() + begin, end - begin));
      PolicyParams grad;
      const LossTerms terms = networks_.Loss(params_, mb, config_, &grad);
      if (!std::isfinite(terms.total) || !grad.AllFinite()) {
        throw diverged(
            "PPO update diverged: policy_loss=" +
            FormatDecimal(terms.policy_loss) +
            " value_loss=" + FormatDecimal(terms.value_loss) +
            " entropy=" + FormatDecimal(terms.entropy) +
            " approx_kl=" + FormatDecimal(terms.approx_kl));
      }
      ApplyGradient(std::move(grad), &diag);
      diag.policy_loss += terms.policy_loss;
      diag.value_loss += terms.value_loss;
      diag.entropy += terms.entropy;
      diag.approx_kl += terms.approx_kl;
      diag.clip_fraction += terms.clip_fraction;
      ++diag.minibatches;
    }
  }
  const double inv = 1.0 / diag.minibatches;
  diag.policy_loss *= inv;
  diag.value_loss *= inv;
  diag.entropy *= inv;
  diag.approx_kl *= inv;
  diag.clip_fraction *= inv;
  diag.grad_norm *= inv;
  if (!params_.AllFinite()) {
    throw diverged("PPO update produced non-finite parameters");
  }
  return diag;
}

void PpoLearner::Save(TextWriter& out) const {
  out.PutInt("ppo.observation_size", networks_.observation_size());
  out.PutInt("ppo.action_size", networks_.action_size());
  out.PutInt("ppo.hidden_size", config_.hidden_size);
  out.PutVector("ppo.actor", AsSpan(params_.actor));
  out.PutVector("ppo.log_std", AsSpan(params_.log_std));
  out.PutVector("ppo.critic", AsSpan(params_.critic));
  actor_adam_.Save(out, "ppo.adam.actor");
  log_std_adam_.Save(out, "ppo.adam.log_std");
  critic_adam_.Save(out, "ppo.adam.critic");
  observation_stats_.Save(out, "ppo.observation_stats");
  return_stats_.Save(out, "ppo.return_stats");
}

void PpoLearner::Load(TextReader& in) {
  if (in.GetInt("ppo.observation_size") != networks_.observation_size() ||
      in.GetInt("ppo.action_size") != networks_.action_size() ||
      in.GetInt("ppo.hidden_size") != config_.hidden_size) {
    throw std::runtime_error("checkpoint network shape does not match config");
  }
  PolicyParams p;
  p.actor = ReadVector(in, "ppo.actor");
  p.log_std = ReadVector(in, "ppo.log_std");
  p.critic = ReadVector(in, "ppo.critic");
  if (p.actor.size() != params_.actor.size() ||
      p.log_std.size() != params_.log_std.size() ||
      p.critic.size() != params_.critic.size()) {
    throw std::runtime_error("checkpoint parameter count mismatch");
  }
  params_ = std::move(p);
  actor_adam_.Load(in, "ppo.adam.actor");
  log_std_adam_.Load(in, "ppo.adam.log_std");
  critic_adam_.Load(in, "ppo.adam.critic");
  observation_stats_.Load(in, "ppo.observation_stats");
  return_stats_.Load(in, "ppo.return_stats");
}

}  // namespace quadlab

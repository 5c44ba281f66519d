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

// Proximal policy optimization with separate actor and critic networks.
// The actor outputs the mean of a diagonal Gaussian whose log standard
// deviation is a free, state-independent parameter vector.

#ifndef QUADLAB_PPO_H_
#define QUADLAB_PPO_H_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "quadlab/adam.h"
#include "quadlab/config_file.h"
#include "quadlab/mlp.h"
#include "quadlab/normalizer.h"
#include "quadlab/rng.h"
#include "quadlab/text_io.h"

namespace quadlab {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

struct PpoConfig {
  double learning_rate = 2.2e-4;
  int horizon = 128;
  int minibatch_count = 4;
  int epochs = 4;
  double clip_epsilon = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double vf_coef = 0.5;
  double entropy_coef = 0.01;

  int hidden_size = 64;
  double log_std_init = 0.0;
  double adam_epsilon = 1e-5;
  double max_grad_norm = 0.5;  // global norm; <= 0 disables clipping
  bool normalize_observations = true;
  double observation_clip = 10.0;
  bool scale_rewards = true;  // divide by running std of discounted return

  void Validate() const;
  void ReadFrom(ConfigFile& file);  // [ppo] section
  void WriteTo(ConfigFile& file) const;
};

struct PolicyParams {
  Eigen::VectorXd actor;    // mean network
  Eigen::VectorXd log_std;  // one per action dimension
  Eigen::VectorXd critic;   // value network

  bool AllFinite() const;
  double SquaredNorm() const;
  void SetZeroLike(const PolicyParams& other);
  bool operator==(const PolicyParams& other) const;
};

// Thrown when a network output, loss or gradient stops being finite.
class TrainingDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ActResult {
  Eigen::VectorXd action;      // clamped to [-1, 1]
  Eigen::VectorXd raw_action;  // Gaussian sample before clamping
  double log_prob = 0.0;       // density of raw_action
  double value = 0.0;
};

// Transitions laid out one per column. Observations are already
// normalized; actions are the raw (pre-clamp) samples.
struct PpoBatch {
  Eigen::MatrixXd observations;
  Eigen::MatrixXd actions;
  Eigen::VectorXd log_probs;
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;

  int size() const { return static_cast<int>(log_probs.size()); }
  PpoBatch Select(std::span<const int> columns) const;
};

struct LossTerms {
  double policy_loss = 0.0;  // -mean(min(rho A, clip(rho) A))
  double value_loss = 0.0;   // mean((V - R)^2)
  double entropy = 0.0;
  double total = 0.0;        // policy + vf_coef value - entropy_coef entropy
  double approx_kl = 0.0;    // mean((rho - 1) - log rho)
  double clip_fraction = 0.0;
};

double GaussianLogProb(const Eigen::VectorXd& mean,
                       const Eigen::VectorXd& log_std,
                       const Eigen::VectorXd& x);
double GaussianEntropy(const Eigen::VectorXd& log_std);

// Network shapes plus the stateless math on top of them.
class PolicyNetworks {
 public:
  PolicyNetworks(int observation_size, int action_size, int hidden_size);

  int observation_size() const { return actor_.input_size(); }
  int action_size() const { return actor_.output_size(); }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }

  // Orthogonal init: gain sqrt(2) on hidden layers, 0.01 on the mean
  // output, 1 on the value output; zero biases.
  PolicyParams Init(double log_std_init, Rng& rng) const;

  ActResult Act(const PolicyParams& params, std::span<const double> obs,
                Rng& rng) const;
  Eigen::VectorXd Mean(const PolicyParams& params,
                       std::span<const double> obs) const;
  double Value(const PolicyParams& params, std::span<const double> obs) const;

  // Loss to minimize and, when grad != nullptr, its gradient.
  LossTerms Loss(const PolicyParams& params, const PpoBatch& batch,
                 const PpoConfig& config, PolicyParams* grad) const;

 private:
  Mlp actor_;
  Mlp critic_;
};

// In place: mean 0, population std 1 (untouched when size < 2).
void NormalizeAdvantages(Eigen::VectorXd& advantages);

// Fisher-Yates permutation of 0..n-1.
std::vector<int> Permutation(int n, Rng& rng);

struct UpdateDiagnostics {
  double policy_loss = 0.0;  // means over minibatches
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  double grad_norm = 0.0;    // before clipping
  int minibatches = 0;
};

// A policy for rollouts that no longer learns.
struct FrozenPolicy {
  PolicyNetworks networks;
  PolicyParams params;
  RunningMeanStd observation_stats;
  bool normalize_observations = true;
  double observation_clip = 10.0;

  std::vector<double> Normalize(std::span<const double> raw_obs) const;
  // Deterministic action: the clamped Gaussian mean.
  std::vector<double> MeanAction(std::span<const double> raw_obs) const;
};

class PpoLearner {
 public:
  PpoLearner(int observation_size, int action_size, const PpoConfig& config,
             Rng& init_rng);

  const PpoConfig& config() const { return config_; }
  const PolicyNetworks& networks() const { return networks_; }
  const PolicyParams& params() const { return params_; }
  PolicyParams& mutable_params() { return params_; }

  RunningMeanStd& observation_stats() { return observation_stats_; }
  const RunningMeanStd& observation_stats() const {
    return observation_stats_;
  }
  RunningMeanStd& return_stats() { return return_stats_; }
  const RunningMeanStd& return_stats() const { return return_stats_; }

  FrozenPolicy Freeze() const;

  // epochs x minibatch_count Adam steps over shuffled minibatches; batch
  // advantages are normalized first. Throws TrainingDivergence on a
  // non-finite loss, gradient or result; parameters and optimizer state are
  // then left as they were before the call.
  UpdateDiagnostics Update(PpoBatch batch, Rng& shuffle_rng);

  void Save(TextWriter& out) const;
  void Load(TextReader& in);

 private:
  void ApplyGradient(PolicyParams grad, UpdateDiagnostics* diag);

  PpoConfig config_;
  PolicyNetworks networks_;
  PolicyParams params_;
  Adam actor_adam_;
  Adam log_std_adam_;
  Adam critic_adam_;
  RunningMeanStd observation_stats_;
  RunningMeanStd return_stats_;
};

}  // namespace quadlab

#endif  // QUADLAB_PPO_H_

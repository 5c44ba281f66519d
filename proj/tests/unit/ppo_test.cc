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
#include <memory>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "quadlab/gae.h"

namespace quadlab {
namespace {

constexpr int kObs = 27;
constexpr int kAct = 8;

PolicyParams Perturb(const PolicyParams& p, double scale, Rng& rng) {
  PolicyParams q = p;
  for (Eigen::Index i = 0; i < q.actor.size(); ++i) q.actor[i] += scale * rng.Normal();
  for (Eigen::Index i = 0; i < q.log_std.size(); ++i) q.log_std[i] += scale * rng.Normal();
  for (Eigen::Index i = 0; i < q.critic.size(); ++i) q.critic[i] += scale * rng.Normal();
  return q;
}

// Batch whose actions and log-probs come from `behavior`, so that the
// ratios under nearby parameters straddle the clip range.
PpoBatch MakeBatch(const PolicyNetworks& nets, const PolicyParams& behavior,
                   int n, Rng& rng) {
  PpoBatch b;
  b.observations.resize(nets.observation_size(), n);
  b.actions.resize(nets.action_size(), n);
  b.log_probs.resize(n);
  b.advantages.resize(n);
  b.returns.resize(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> obs(nets.observation_size());
    for (double& x : obs) x = rng.Normal();
    const ActResult a = nets.Act(behavior, obs, rng);
    b.observations.col(i) = Eigen::Map<const Eigen::VectorXd>(obs.data(), obs.size());
    b.actions.col(i) = a.raw_action;
    b.log_probs[i] = a.log_prob;
    b.advantages[i] = rng.Normal();
    b.returns[i] = rng.Normal();
  }
  return b;
}

double RelativeError(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), 1e-5});
}

TEST(GaussianTest, LogProbAndEntropyClosedForms) {
  Eigen::VectorXd mean(2), log_std(2), x(2);
  mean << 0.5, -1.0;
  log_std << 0.0, std::log(2.0);
  x << 1.5, 1.0;
  const double expected = -0.5 * (1.0 + 1.0) - std::log(2.0) -
                          std::log(2.0 * std::numbers::pi);
  EXPECT_NEAR(GaussianLogProb(mean, log_std, x), expected, 1e-14);
  EXPECT_NEAR(GaussianEntropy(log_std),
              1.0 + std::log(2.0 * std::numbers::pi) + std::log(2.0), 1e-14);
}

TEST(ActTest, VanishingNoiseGivesTheMean) {
  const PolicyNetworks nets(kObs, kAct, 64);
  Rng rng(1);
  PolicyParams p = nets.Init(-5.0, rng);
  p = Perturb(p, 0.05, rng);
  p.log_std.setConstant(-5.0);
  std::vector<double> obs(kObs, 0.3);
  const Eigen::VectorXd mean = nets.Mean(p, obs);
  // sigma = e^-5 ~ 0.0067: single draws land beyond 1e-2 about 14% of the
  // time, so the mean deviation carries the 1e-2 check and each draw gets 5
  // sigma
  const double sigma = std::exp(-5.0);
  double total_deviation = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ActResult a = nets.Act(p, obs, rng);
    for (int j = 0; j < kAct; ++j) {
      const double deviation = std::abs(a.action[j] - std::clamp(mean[j], -1.0, 1.0));
      EXPECT_LE(deviation, 5 * sigma);
      total_deviation += deviation;
    }
  }
  EXPECT_LE(total_deviation / (200 * kAct), 1e-2);
}

TEST(ActTest, DeterministicForFixedSeed) {
  const PolicyNetworks nets(kObs, kAct, 64);
  Rng init(2);
  const PolicyParams p = nets.Init(0.0, init);
  std::vector<double> obs(kObs, -0.1);
  Rng a(7), b(7);
  const ActResult x = nets.Act(p, obs, a);
  const ActResult y = nets.Act(p, obs, b);
  EXPECT_EQ(x.raw_action, y.raw_action);
  EXPECT_EQ(x.log_prob, y.log_prob);
  EXPECT_EQ(x.value, y.value);
  EXPECT_EQ(x.log_prob, GaussianLogProb(nets.Mean(p, obs), p.log_std, x.raw_action));
}

TEST(ActTest, SampleMeanMatchesNetworkMean) {
  const PolicyNetworks nets(kObs, kAct, 64);
  Rng rng(3);
  PolicyParams p = Perturb(nets.Init(0.0, rng), 0.05, rng);
  p.log_std.setConstant(std::log(0.5));
  std::vector<double> obs(kObs);
  for (double& x : obs) x = rng.Normal();
  const Eigen::VectorXd mean = nets.Mean(p, obs);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(kAct);
  for (int i = 0; i < 10000; ++i) sum += nets.Act(p, obs, rng).raw_action;
  const Eigen::VectorXd sample_mean = sum / 10000.0;
  for (int j = 0; j < kAct; ++j) {
    EXPECT_LE(std::abs(sample_mean[j] - mean[j]), 3.0 * 0.5 / 100.0) << j;
  }
}

TEST(LossTest, GradientMatchesCentralDifferences) {
  const PolicyNetworks nets(kObs, kAct, 64);
  PpoConfig config;
  Rng rng(4);
  for (int point = 0; point < 5; ++point) {
    const PolicyParams behavior = Perturb(nets.Init(-0.5, rng), 0.05, rng);
    const PolicyParams params = Perturb(behavior, 0.02, rng);
    const PpoBatch batch = MakeBatch(nets, behavior, 16, rng);
    PolicyParams grad;
    nets.Loss(params, batch, config, &grad);

    const double h = 1e-6;
    auto numeric = [&](Eigen::VectorXd PolicyParams::*block, Eigen::Index i) {
      PolicyParams plus = params, minus = params;
      (plus.*block)[i] += h;
      (minus.*block)[i] -= h;
      return (nets.Loss(plus, batch, config, nullptr).total -
              nets.Loss(minus, batch, config, nullptr).total) / (2 * h);
    };
    for (int s = 0; s < 100; ++s) {
      const auto i = static_cast<Eigen::Index>(rng.UniformInt(params.actor.size()));
      ASSERT_LE(RelativeError(grad.actor[i], numeric(&PolicyParams::actor, i)), 1e-4)
          << "actor " << i;
      const auto c = static_cast<Eigen::Index>(rng.UniformInt(params.critic.size()));
      ASSERT_LE(RelativeError(grad.critic[c], numeric(&PolicyParams::critic, c)), 1e-4)
          << "critic " << c;
    }
    for (Eigen::Index i = 0; i < params.log_std.size(); ++i) {
      ASSERT_LE(RelativeError(grad.log_std[i], numeric(&PolicyParams::log_std, i)), 1e-4)
          << "log_std " << i;
    }
  }
}

TEST(LossTest, UnitRatioGivesVanillaPolicyGradient) {
  const PolicyNetworks nets(kObs, kAct, 64);
  PpoConfig config;
  config.entropy_coef = 0.0;
  config.vf_coef = 0.0;
  Rng rng(5);
  const PolicyParams p = Perturb(nets.Init(0.0, rng), 0.05, rng);
  const PpoBatch batch = MakeBatch(nets, p, 12, rng);
  PolicyParams grad;
  const LossTerms terms = nets.Loss(p, batch, config, &grad);
  EXPECT_EQ(terms.clip_fraction, 0.0);
  EXPECT_NEAR(terms.approx_kl, 0.0, 1e-12);

  // -(1/n) sum A_i grad log pi(a_i | s_i), assembled sample by sample
  PolicyParams expected;
  expected.SetZeroLike(p);
  for (int i = 0; i < batch.size(); ++i) {
    const Eigen::VectorXd mean = nets.Mean(p, std::span<const double>(
        batch.observations.col(i).data(), kObs));
    const Eigen::VectorXd inv_var = (-2.0 * p.log_std).array().exp();
    const Eigen::VectorXd diff = batch.actions.col(i) - mean;
    const double w = -batch.advantages[i] / batch.size();
    Mlp::Cache cache;
    nets.actor().Forward(p.actor, batch.observations.col(i), &cache);
    nets.actor().Backward(p.actor, cache, w * diff.cwiseProduct(inv_var),
                          &expected.actor);
    expected.log_std +=
        w * (diff.cwiseProduct(diff).cwiseProduct(inv_var).array() - 1.0).matrix();
  }
  EXPECT_LE((grad.actor - expected.actor).norm(), 1e-10 * (1 + expected.actor.norm()));
  EXPECT_LE((grad.log_std - expected.log_std).norm(), 1e-10 * (1 + expected.log_std.norm()));
}

TEST(LossTest, ZeroAdvantagesGiveZeroPolicyLoss) {
  const PolicyNetworks nets(kObs, kAct, 64);
  PpoConfig config;
  Rng rng(6);
  const PolicyParams behavior = nets.Init(0.0, rng);
  const PolicyParams p = Perturb(behavior, 0.05, rng);
  PpoBatch batch = MakeBatch(nets, behavior, 10, rng);
  batch.advantages.setZero();
  PolicyParams grad;
  const LossTerms terms = nets.Loss(p, batch, config, &grad);
  EXPECT_EQ(terms.policy_loss, 0.0);
  EXPECT_EQ(grad.actor.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(grad.log_std.isApprox(
      Eigen::VectorXd::Constant(kAct, -config.entropy_coef), 1e-15));
  EXPECT_GT(grad.critic.norm(), 0.0);
  EXPECT_NEAR(terms.total, config.vf_coef * terms.value_loss -
                               config.entropy_coef * terms.entropy, 1e-12);
}

// The per-sample surrogate never rewards pushing the ratio past the clip
// range: it stays at or below (1 + eps) A for A > 0 and (1 - eps) A for
// A < 0.
TEST(LossTest, SurrogateIsBoundedByTheClipRange) {
  const PolicyNetworks nets(kObs, kAct, 64);
  PpoConfig config;
  Rng rng(7);
  const PolicyParams behavior = nets.Init(0.0, rng);
  int clipped = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const PolicyParams p = Perturb(behavior, 0.3, rng);
    const PpoBatch one = MakeBatch(nets, behavior, 1, rng);
    const double a = one.advantages[0];
    const LossTerms terms = nets.Loss(p, one, config, nullptr);
    const double objective = -terms.policy_loss;
    const double bound = a > 0 ? (1 + config.clip_epsilon) * a
                               : (1 - config.clip_epsilon) * a;
    EXPECT_LE(objective, bound + 1e-12);
    if (terms.clip_fraction > 0) ++clipped;
  }
  EXPECT_GT(clipped, 20);
}

TEST(AdvantageTest, NormalizedMeanAndStd) {
  Rng rng(8);
  for (int n : {2, 3, 32, 128}) {
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a[i] = 5.0 + 3.0 * rng.Normal();
    NormalizeAdvantages(a);
    const double mean = a.mean();
    const double std = std::sqrt((a.array() - mean).square().mean());
    EXPECT_LE(std::abs(mean), 1e-8);
    EXPECT_LE(std::abs(std - 1.0), 1e-6);
  }
  Eigen::VectorXd single(1);
  single << 4.0;
  NormalizeAdvantages(single);
  EXPECT_EQ(single[0], 4.0);
}

TEST(PermutationTest, IsAPermutation) {
  Rng rng(9);
  std::vector<int> p = Permutation(100, rng);
  std::sort(p.begin(), p.end());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(p[i], i);
}

// One-dimensional "move right": x <- x + 0.1 clip(a), reward max(0, x),
// 25 steps per episode, observation (x, t / 25).
class MoveRight {
 public:
  static constexpr int kSteps = 25;
  std::vector<double> Reset() {
    x_ = 0.0;
    t_ = 0;
    return Obs();
  }
  double Step(double a) {
    x_ += 0.1 * std::clamp(a, -1.0, 1.0);
    ++t_;
    return std::max(0.0, x_);
  }
  bool done() const { return t_ >= kSteps; }
  std::vector<double> Obs() const { return {x_, static_cast<double>(t_) / kSteps}; }

 private:
  double x_ = 0.0;
  int t_ = 0;
};

TEST(LearningTest, MoveRightToyImprovesFiveFold) {
  PpoConfig config;
  Rng init(10), act_rng(11), shuffle(12);
  PpoLearner learner(2, 1, config, init);
  MoveRight env;
  std::vector<double> obs = env.Reset();

  for (int update = 0; update < 200; ++update) {
    const int n = config.horizon;
    PpoBatch batch;
    batch.observations.resize(2, n);
    batch.actions.resize(1, n);
    batch.log_probs.resize(n);
    std::vector<double> rewards(n), values(n);
    auto dones = std::make_unique<bool[]>(n);
    for (int t = 0; t < n; ++t) {
      const ActResult a = learner.networks().Act(learner.params(), obs, act_rng);
      batch.observations.col(t) << obs[0], obs[1];
      batch.actions(0, t) = a.raw_action[0];
      batch.log_probs[t] = a.log_prob;
      values[t] = a.value;
      rewards[t] = env.Step(a.action[0]);
      dones[t] = env.done();
      obs = env.done() ? env.Reset() : env.Obs();
    }
    const double bootstrap = learner.networks().Value(learner.params(), obs);
    const GaeResult gae = ComputeGae(rewards, values, {dones.get(), std::size_t(n)},
                                     bootstrap, config.gamma, config.gae_lambda);
    batch.advantages = Eigen::Map<const Eigen::VectorXd>(gae.advantages.data(), n);
    batch.returns = Eigen::Map<const Eigen::VectorXd>(gae.returns.data(), n);
    learner.Update(std::move(batch), shuffle);
  }

  auto mean_return = [&](auto policy) {
    double total = 0.0;
    for (int episode = 0; episode < 100; ++episode) {
      std::vector<double> o = env.Reset();
      while (!env.done()) {
        total += env.Step(policy(o));
        o = env.Obs();
      }
    }
    return total / 100;
  };
  Rng eval_rng(13);
  const double trained = mean_return([&](const std::vector<double>& o) {
    return learner.networks().Act(learner.params(), o, eval_rng).action[0];
  });
  const double random = mean_return(
      [&](const std::vector<double>&) { return 2.0 * eval_rng.Uniform() - 1.0; });
  EXPECT_GT(random, 0.0);
  EXPECT_GE(trained, 5.0 * random) << "trained " << trained << " random " << random;
}

TEST(LearnerTest, SaveLoadIsByteStable) {
  PpoConfig config;
  Rng init(14), rng(15);
  PpoLearner a(kObs, kAct, config, init);
  PpoBatch batch = MakeBatch(a.networks(), a.params(), 128, rng);
  a.Update(batch, rng);
  std::vector<std::vector<double>> obs(5, std::vector<double>(kObs, 1.0));
  a.observation_stats().Update(obs);

  std::stringstream first;
  {
    TextWriter w(first);
    a.Save(w);
  }
  Rng other(99);
  PpoLearner b(kObs, kAct, config, other);
  {
    std::stringstream in(first.str());
    TextReader r(in);
    b.Load(r);
  }
  EXPECT_EQ(b.params(), a.params());
  std::stringstream second;
  {
    TextWriter w(second);
    b.Save(w);
  }
  EXPECT_EQ(first.str(), second.str());

  // identical continuation
  Rng ra(16), rb(16);
  a.Update(batch, ra);
  b.Update(batch, rb);
  EXPECT_EQ(a.params(), b.params());
}

TEST(LearnerTest, DivergenceLeavesParametersIntact) {
  PpoConfig config;
  Rng init(17), rng(18);
  PpoLearner learner(kObs, kAct, config, init);
  PpoBatch batch = MakeBatch(learner.networks(), learner.params(), 128, rng);
  batch.returns[3] = std::numeric_limits<double>::infinity();
  const PolicyParams before = learner.params();
  EXPECT_THROW(learner.Update(batch, rng), TrainingDivergence);
  EXPECT_EQ(learner.params(), before);
}

TEST(LearnerTest, LogStdStaysClamped) {
  PpoConfig config;
  config.learning_rate = 0.5;
  config.max_grad_norm = 0.0;
  config.entropy_coef = 100.0;  // drives log-std upward
  Rng init(19), rng(20);
  PpoLearner learner(kObs, kAct, config, init);
  const PpoBatch batch = MakeBatch(learner.networks(), learner.params(), 64, rng);
  for (int i = 0; i < 10; ++i) learner.Update(batch, rng);
  EXPECT_LE(learner.params().log_std.maxCoeff(), kLogStdMax);
}

TEST(PpoConfigTest, DefaultsAndValidation) {
  PpoConfig c;
  EXPECT_EQ(c.learning_rate, 0.00022);
  EXPECT_EQ(c.horizon, 128);
  EXPECT_EQ(c.minibatch_count, 4);
  EXPECT_EQ(c.epochs, 4);
  EXPECT_EQ(c.clip_epsilon, 0.2);
  EXPECT_EQ(c.gamma, 0.99);
  EXPECT_EQ(c.gae_lambda, 0.95);
  EXPECT_EQ(c.vf_coef, 0.5);
  EXPECT_EQ(c.entropy_coef, 0.01);
  EXPECT_NO_THROW(c.Validate());
  c.gamma = 1.5;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = {};
  c.clip_epsilon = 0.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace quadlab

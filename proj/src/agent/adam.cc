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

#include "quadlab/adam.h"

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadlab {
namespace {

std::span<const double> AsSpan(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

Eigen::VectorXd FromVector(const std::vector<double>& v, Eigen::Index size) {
  if (static_cast<Eigen::Index>(v.size()) != size) {
    throw std::runtime_error("Adam: moment size mismatch");
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), size);
}

}  // namespace

Adam::Adam(int size, AdamConfig config)
    : config_(config),
      m_(Eigen::VectorXd::Zero(size)),
      v_(Eigen::VectorXd::Zero(size)) {}

void Adam::Step(const Eigen::VectorXd& grad, Eigen::VectorXd* params) {
  if (grad.size() != m_.size() || params->size() != m_.size()) {
    throw std::invalid_argument("Adam: size mismatch");
  }
  ++steps_;
  m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * grad;
  v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
  const double lr = config_.learning_rate;
  for (Eigen::Index i = 0; i < m_.size(); ++i) {
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    (*params)[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

void Adam::Save(TextWriter& out, std::string_view prefix) const {
  const std::string p(prefix);
  out.Put(p + ".lr", config_.learning_rate);
  out.Put(p + ".beta1", config_.beta1);
  out.Put(p + ".beta2", config_.beta2);
  out.Put(p + ".epsilon", config_.epsilon);
  out.PutInt(p + ".steps", steps_);
  out.PutVector(p + ".m", AsSpan(m_));
  out.PutVector(p + ".v", AsSpan(v_));
}

void Adam::Load(TextReader& in, std::string_view prefix) {
  const std::string p(prefix);
  config_.learning_rate = in.Get(p + ".lr");
  config_.beta1 = in.Get(p + ".beta1");
  config_.beta2 = in.Get(p + ".beta2");
  config_.epsilon = in.Get(p + ".epsilon");
  steps_ = in.GetInt(p + ".steps");
  const std::vector<double> m = in.GetVector(p + ".m");
  m_ = FromVector(m, static_cast<Eigen::Index>(m.size()));
  v_ = FromVector(in.GetVector(p + ".v"), m_.size());
}

}  // namespace quadlab

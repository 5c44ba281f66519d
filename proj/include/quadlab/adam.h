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

#ifndef QUADLAB_ADAM_H_
#define QUADLAB_ADAM_H_

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

#include "quadlab/text_io.h"

namespace quadlab {

struct AdamConfig {
  double learning_rate = 2.2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-5;
};

// Bias-corrected Adam over one flat parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(int size, AdamConfig config);

  // params -= lr * m_hat / (sqrt(v_hat) + eps)
  void Step(const Eigen::VectorXd& grad, Eigen::VectorXd* params);

  int64_t steps() const { return steps_; }
  const AdamConfig& config() const { return config_; }
  void set_learning_rate(double lr) { config_.learning_rate = lr; }

  void Save(TextWriter& out, std::string_view prefix) const;
  void Load(TextReader& in, std::string_view prefix);

 private:
  AdamConfig config_;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  int64_t steps_ = 0;
};

}  // namespace quadlab

#endif  // QUADLAB_ADAM_H_

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

#ifndef QUADLAB_MLP_H_
#define QUADLAB_MLP_H_

#include <vector>

#include <Eigen/Core>

#include "quadlab/rng.h"

namespace quadlab {

// Fully connected network, tanh on hidden layers, linear output. The
// network object only describes the shape; parameters live in a flat vector
// laid out layer by layer as W (out x in, column-major) then b (out).
//
// Batches are column-major: one sample per column.
class Mlp {
 public:
  // Layer widths including input and output, e.g. {27, 64, 64, 8}.
  explicit Mlp(std::vector<int> sizes);

  int num_params() const { return num_params_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  const std::vector<int>& sizes() const { return sizes_; }

  // Orthogonal weights (scaled by gain), zero biases. Hidden layers use
  // hidden_gain, the last layer output_gain.
  Eigen::VectorXd InitOrthogonal(double hidden_gain, double output_gain,
                                 Rng& rng) const;

  // Per-layer activations; activations[0] is the input batch.
  struct Cache {
    std::vector<Eigen::MatrixXd> activations;
  };

  Eigen::MatrixXd Forward(const Eigen::VectorXd& params,
                          const Eigen::MatrixXd& inputs,
                          Cache* cache = nullptr) const;

  // Adds d(sum(grad_out .* output)) / d(params) to *grad. The cache must
  // come from Forward with the same params.
  void Backward(const Eigen::VectorXd& params, const Cache& cache,
                const Eigen::MatrixXd& grad_out, Eigen::VectorXd* grad) const;

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;  // start of each layer's W
  int num_params_ = 0;
};

// Random matrix with orthonormal rows or columns (whichever is shorter),
// times gain.
Eigen::MatrixXd OrthogonalMatrix(int rows, int cols, double gain, Rng& rng);

}  // namespace quadlab

#endif  // QUADLAB_MLP_H_

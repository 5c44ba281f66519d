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

#include "quadlab/mlp.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include <Eigen/QR>

namespace quadlab {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need >= 2 sizes");
  for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
    if (sizes_[i] < 1 || sizes_[i + 1] < 1) {
      throw std::invalid_argument("Mlp: layer sizes must be positive");
    }
    offsets_.push_back(num_params_);
    num_params_ += sizes_[i + 1] * sizes_[i] + sizes_[i + 1];
  }
}

Eigen::MatrixXd OrthogonalMatrix(int rows, int cols, double gain, Rng& rng) {
  const int n = std::max(rows, cols);
  const int k = std::min(rows, cols);
  Eigen::MatrixXd a(n, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < n; ++i) a(i, j) = rng.Normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  // sign fix so the draw is uniform over the orthogonal group
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k);
  for (int j = 0; j < k; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  Eigen::MatrixXd out = rows >= cols ? q : Eigen::MatrixXd(q.transpose());
  return gain * out;
}

Eigen::VectorXd Mlp::InitOrthogonal(double hidden_gain, double output_gain,
                                    Rng& rng) const {
  Eigen::VectorXd params = Eigen::VectorXd::Zero(num_params_);
  for (int l = 0; l < num_layers(); ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double gain = l + 1 == num_layers() ? output_gain : hidden_gain;
    Eigen::Map<Eigen::MatrixXd>(params.data() + offsets_[l], out, in) =
        OrthogonalMatrix(out, in, gain, rng);
  }
  return params;
}

Eigen::MatrixXd Mlp::Forward(const Eigen::VectorXd& params,
                             const Eigen::MatrixXd& inputs,
                             Cache* cache) const {
  if (params.size() != num_params_) {
    throw std::invalid_argument("Mlp: parameter count mismatch");
  }
  if (inputs.rows() != input_size()) {
    throw std::invalid_argument("Mlp: input width mismatch");
  }
  if (cache) {
    cache->activations.clear();
    cache->activations.push_back(inputs);
  }
  Eigen::MatrixXd x = inputs;
  for (int l = 0; l < num_layers(); ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    Eigen::Map<const Eigen::MatrixXd> w(params.data() + offsets_[l], out, in);
    Eigen::Map<const Eigen::VectorXd> b(params.data() + offsets_[l] + out * in,
                                        out);
    Eigen::MatrixXd z = w * x;
    z.colwise() += b;
    if (l + 1 < num_layers()) z = z.array().tanh().matrix();
    x = std::move(z);
    if (cache) cache->activations.push_back(x);
  }
  return x;
}

void Mlp::Backward(const Eigen::VectorXd& params, const Cache& cache,
                   const Eigen::MatrixXd& grad_out,
                   Eigen::VectorXd* grad) const {
  if (grad->size() != num_params_) {
    throw std::invalid_argument("Mlp: gradient size mismatch");
  }
  if (static_cast<int>(cache.activations.size()) != num_layers() + 1) {
    throw std::invalid_argument("Mlp: cache does not match network");
  }
  Eigen::MatrixXd delta = grad_out;  // d/d(pre-activation) of layer l
  for (int l = num_layers() - 1; l >= 0; --l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const Eigen::MatrixXd& x = cache.activations[l];
    Eigen::Map<Eigen::MatrixXd> gw(grad->data() + offsets_[l], out, in);
    Eigen::Map<Eigen::VectorXd> gb(grad->data() + offsets_[l] + out * in, out);
    gw.noalias() += delta * x.transpose();
    gb += delta.rowwise().sum();
    if (l == 0) break;
    Eigen::Map<const Eigen::MatrixXd> w(params.data() + offsets_[l], out, in);
    Eigen::MatrixXd back = w.transpose() * delta;
    // tanh' = 1 - y^2 on the previous layer's output
    delta = back.array() * (1.0 - x.array().square());
  }
}

}  // namespace quadlab

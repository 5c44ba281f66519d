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

#include "quadlab/normalizer.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace quadlab {

RunningMeanStd::RunningMeanStd(int size)
    : mean_(size, 0.0), var_(size, 1.0) {
  if (size < 1) throw std::invalid_argument("RunningMeanStd: size < 1");
}

void RunningMeanStd::Update(std::span<const std::vector<double>> batch) {
  if (batch.empty()) return;
  const std::size_t d = mean_.size();
  const double n = static_cast<double>(batch.size());
  std::vector<double> m(d, 0.0), v(d, 0.0);
  for (const auto& row : batch) {
    if (row.size() != d) {
      throw std::invalid_argument("RunningMeanStd: sample width mismatch");
    }
    for (std::size_t j = 0; j < d; ++j) m[j] += row[j];
  }
  for (double& x : m) x /= n;
  for (const auto& row : batch) {
    for (std::size_t j = 0; j < d; ++j) {
      const double e = row[j] - m[j];
      v[j] += e * e;
    }
  }
  for (double& x : v) x /= n;
  Merge(m, v, n);
}

void RunningMeanStd::Update(std::span<const double> samples) {
  if (mean_.size() != 1) {
    throw std::invalid_argument("RunningMeanStd: scalar update on vector");
  }
  if (samples.empty()) return;
  const double n = static_cast<double>(samples.size());
  double m = 0.0;
  for (double x : samples) m += x;
  m /= n;
  double v = 0.0;
  for (double x : samples) v += (x - m) * (x - m);
  v /= n;
  Merge({m}, {v}, n);
}

void RunningMeanStd::Merge(const std::vector<double>& batch_mean,
                           const std::vector<double>& batch_var,
                           double batch_count) {
  const double total = count_ + batch_count;
  for (std::size_t j = 0; j < mean_.size(); ++j) {
    const double delta = batch_mean[j] - mean_[j];
    const double m2 = var_[j] * count_ + batch_var[j] * batch_count +
                      delta * delta * count_ * batch_count / total;
    mean_[j] += delta * batch_count / total;
    var_[j] = m2 / total;
  }
  count_ = total;
}

void RunningMeanStd::Save(TextWriter& out, std::string_view prefix) const {
  const std::string p(prefix);
  out.Put(p + ".count", count_);
  out.PutVector(p + ".mean", mean_);
  out.PutVector(p + ".var", var_);
}

void RunningMeanStd::Load(TextReader& in, std::string_view prefix) {
  const std::string p(prefix);
  count_ = in.Get(p + ".count");
  mean_ = in.GetVector(p + ".mean");
  var_ = in.GetVector(p + ".var");
  if (mean_.size() != var_.size() || mean_.empty()) {
    throw std::runtime_error("RunningMeanStd: corrupt statistics");
  }
}

void NormalizeInPlace(const RunningMeanStd& stats, double clip,
                      std::span<double> x) {
  if (static_cast<int>(x.size()) != stats.size()) {
    throw std::invalid_argument("NormalizeInPlace: width mismatch");
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double z = (x[j] - stats.mean()[j]) / std::sqrt(stats.var()[j] + 1e-8);
    x[j] = std::clamp(z, -clip, clip);
  }
}

}  // namespace quadlab

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

#ifndef QUADLAB_NORMALIZER_H_
#define QUADLAB_NORMALIZER_H_

#include <span>
#include <string_view>
#include <vector>

#include "quadlab/text_io.h"

namespace quadlab {

// Per-component running mean and variance, merged batch-wise (Chan et al.
// parallel update). Starts from a tiny pseudo-count so the first batch
// dominates.
class RunningMeanStd {
 public:
  explicit RunningMeanStd(int size = 1);

  // Each row of the batch is one sample of width size().
  void Update(std::span<const std::vector<double>> batch);
  void Update(std::span<const double> samples);  // size() == 1 only

  int size() const { return static_cast<int>(mean_.size()); }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& var() const { return var_; }
  double count() const { return count_; }

  void Save(TextWriter& out, std::string_view prefix) const;
  void Load(TextReader& in, std::string_view prefix);

  bool operator==(const RunningMeanStd&) const = default;

 private:
  void Merge(const std::vector<double>& batch_mean,
             const std::vector<double>& batch_var, double batch_count);

  std::vector<double> mean_;
  std::vector<double> var_;
  double count_ = 1e-4;
};

// (x - mean) / sqrt(var + 1e-8), clipped to [-clip, clip].
void NormalizeInPlace(const RunningMeanStd& stats, double clip,
                      std::span<double> x);

}  // namespace quadlab

#endif  // QUADLAB_NORMALIZER_H_

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


#include "quadlab/compare.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "quadlab/csv.h"
#include "quadlab/svg_plot.h"
#include "quadlab/text_io.h"

namespace quadlab {
namespace {

using ConditionKey = std::pair<std::string, uint64_t>;

ConditionKey KeyOf(const std::string& condition, double k) {
  return {condition, std::isnan(k) ? 0 : std::bit_cast<uint64_t>(k)};
}

std::vector<std::string> PolicyOrder(const std::vector<ComparisonRow>& rows) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const ComparisonRow& r : rows) {
    if (seen.insert(r.policy).second) order.push_back(r.policy);
  }
  return order;
}

}  // namespace

std::vector<ComparisonRow> Compare(
    const std::vector<std::vector<SummaryRow>>& reports) {
  if (reports.size() < 2) {
    throw std::invalid_argument("compare needs at least two reports");
  }
  std::vector<ConditionKey> keys;
  for (const SummaryRow& row : reports.front()) {
    keys.push_back(KeyOf(row.condition, row.k));
  }
  const std::set<ConditionKey> expected(keys.begin(), keys.end());
  for (const auto& report : reports) {
    std::set<ConditionKey> got;
    for (const SummaryRow& row : report) got.insert(KeyOf(row.condition, row.k));
    if (got != expected || report.size() != keys.size()) {
      throw std::invalid_argument("compare: reports cover different conditions");
    }
  }

  std::vector<ComparisonRow> rows;
  for (const ConditionKey& key : keys) {
    const std::size_t first = rows.size();
    for (const auto& report : reports) {
      for (const SummaryRow& s : report) {
        if (KeyOf(s.condition, s.k) != key) continue;
        rows.push_back({s.condition, s.k, s.policy, s.mean_reward, s.se_reward,
                        s.mean_distance, s.se_distance, 0, 0});
      }
    }
    for (std::size_t i = first; i < rows.size(); ++i) {
      int reward_rank = 1;
      int distance_rank = 1;
      for (std::size_t j = first; j < rows.size(); ++j) {
        if (rows[j].mean_reward > rows[i].mean_reward) ++reward_rank;
        if (rows[j].mean_distance > rows[i].mean_distance) ++distance_rank;
      }
      rows[i].reward_rank = reward_rank;
      rows[i].distance_rank = distance_rank;
    }
  }
  return rows;
}

void WriteComparisonCsv(const std::filesystem::path& path,
                        const std::vector<ComparisonRow>& rows) {
  CsvWriter csv(path, {"condition", "k", "policy", "mean_reward", "se_reward",
                       "mean_distance", "se_distance", "reward_rank",
                       "distance_rank"});
  for (const ComparisonRow& r : rows) {
    csv.Row({r.condition, std::isnan(r.k) ? "" : FormatDecimal(r.k), r.policy,
             FormatDecimal(r.mean_reward), FormatDecimal(r.se_reward),
             FormatDecimal(r.mean_distance), FormatDecimal(r.se_distance),
             std::to_string(r.reward_rank), std::to_string(r.distance_rank)});
  }
}

std::vector<std::filesystem::path> WriteComparisonPlots(
    const std::filesystem::path& dir, const std::vector<ComparisonRow>& rows) {
  std::filesystem::create_directories(dir);
  const std::vector<std::string> policies = PolicyOrder(rows);
  std::vector<std::filesystem::path> written;

  std::vector<std::string> categories;
  for (const ComparisonRow& r : rows) {
    if (r.condition == "k_sweep") continue;
    if (std::find(categories.begin(), categories.end(), r.condition) ==
        categories.end()) {
      categories.push_back(r.condition);
    }
  }
  if (!categories.empty()) {
    std::vector<BarSeries> reward, distance;
    for (const std::string& p : policies) {
      BarSeries rs{p, {}, {}}, ds{p, {}, {}};
      for (const std::string& c : categories) {
        for (const ComparisonRow& r : rows) {
          if (r.policy != p || r.condition != c) continue;
          rs.values.push_back(r.mean_reward);
          rs.errors.push_back(r.se_reward);
          ds.values.push_back(r.mean_distance);
          ds.errors.push_back(r.se_distance);
        }
      }
      reward.push_back(std::move(rs));
      distance.push_back(std::move(ds));
    }
    written.push_back(dir / "reward.svg");
    WriteBarChartSvg(written.back(),
                     {"Average reward", "condition", "reward"}, categories,
                     reward);
    written.push_back(dir / "distance.svg");
    WriteBarChartSvg(written.back(),
                     {"Average walking distance", "condition", "distance (m)"},
                     categories, distance);
  }

  std::vector<LineSeries> reward_curves, distance_curves;
  for (const std::string& p : policies) {
    LineSeries rs{p, {}, {}, {}}, ds{p, {}, {}, {}};
    for (const ComparisonRow& r : rows) {
      if (r.policy != p || r.condition != "k_sweep") continue;
      rs.xs.push_back(r.k);
      rs.ys.push_back(r.mean_reward);
      rs.errors.push_back(r.se_reward);
      ds.xs.push_back(r.k);
      ds.ys.push_back(r.mean_distance);
      ds.errors.push_back(r.se_distance);
    }
    if (!rs.xs.empty()) {
      reward_curves.push_back(std::move(rs));
      distance_curves.push_back(std::move(ds));
    }
  }
  if (!reward_curves.empty()) {
    written.push_back(dir / "k_sweep_reward.svg");
    WriteLineChartSvg(written.back(), {"Reward per k", "k", "reward"},
                      reward_curves);
    written.push_back(dir / "k_sweep_distance.svg");
    WriteLineChartSvg(written.back(),
                      {"Walking distance per k", "k", "distance (m)"},
                      distance_curves);
  }
  return written;
}

}  // namespace quadlab

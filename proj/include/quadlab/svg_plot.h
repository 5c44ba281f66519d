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

#ifndef QUADLAB_SVG_PLOT_H_
#define QUADLAB_SVG_PLOT_H_

#include <filesystem>
#include <string>
#include <vector>

namespace quadlab {

// Minimal static SVG charts for reports. No interactivity, no fonts beyond
// the viewer's default sans-serif.

struct BarSeries {
  std::string name;
  std::vector<double> values;  // one per category
  std::vector<double> errors;  // same length, or empty for no error bars
};

struct LineSeries {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> errors;  // same length as ys, or empty
};

struct BandSeries {
  std::string name;
  std::vector<double> xs;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct ChartLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

// Grouped bars: one group per category, one bar per series.
void WriteBarChartSvg(const std::filesystem::path& path,
                      const ChartLabels& labels,
                      const std::vector<std::string>& categories,
                      const std::vector<BarSeries>& series);

void WriteLineChartSvg(const std::filesystem::path& path,
                       const ChartLabels& labels,
                       const std::vector<LineSeries>& series);

// Step-shaped shaded regions, e.g. a curriculum interval over time.
void WriteBandChartSvg(const std::filesystem::path& path,
                       const ChartLabels& labels,
                       const std::vector<BandSeries>& bands);

}  // namespace quadlab

#endif  // QUADLAB_SVG_PLOT_H_

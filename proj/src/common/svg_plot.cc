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

#include "quadlab/svg_plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace quadlab {
namespace {

constexpr double kWidth = 820;
constexpr double kHeight = 480;
constexpr double kLeft = 80;
constexpr double kRight = 180;  // legend column
constexpr double kTop = 50;
constexpr double kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#2ca02c", "#d62728", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                "#bcbd22", "#17becf"};

const char* Color(std::size_t i) {
  return kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

std::string Num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void Add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  // Pads degenerate or empty ranges so the mapping stays well defined.
  void Finish(bool include_zero) {
    if (lo > hi) { lo = 0; hi = 1; }
    if (include_zero) { lo = std::min(lo, 0.0); hi = std::max(hi, 0.0); }
    if (hi - lo < 1e-12) { lo -= 0.5; hi += 0.5; }
    const double pad = 0.05 * (hi - lo);
    if (!(include_zero && lo == 0.0)) lo -= pad;
    hi += pad;
  }
};

class Canvas {
 public:
  Canvas(const ChartLabels& labels, Range x, Range y)
      : x_(x), y_(y) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
         << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         << "<text x=\"" << kWidth / 2 - kRight / 2 << "\" y=\"28\" "
         << "text-anchor=\"middle\" font-size=\"16\">" << Escape(labels.title)
         << "</text>\n"
         << "<text x=\"" << kLeft + PlotWidth() / 2 << "\" y=\""
         << kHeight - 15 << "\" text-anchor=\"middle\" font-size=\"13\">"
         << Escape(labels.x_label) << "</text>\n"
         << "<text x=\"18\" y=\"" << kTop + PlotHeight() / 2
         << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 "
         << "18 " << kTop + PlotHeight() / 2 << ")\">" << Escape(labels.y_label)
         << "</text>\n";
    DrawYAxis();
  }

  static double PlotWidth() { return kWidth - kLeft - kRight; }
  static double PlotHeight() { return kHeight - kTop - kBottom; }

  double X(double v) const {
    return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * PlotWidth();
  }
  double Y(double v) const {
    return kTop + (y_.hi - v) / (y_.hi - y_.lo) * PlotHeight();
  }

  void DrawXTicks() {
    for (int i = 0; i <= 5; ++i) {
      const double v = x_.lo + (x_.hi - x_.lo) * i / 5.0;
      out_ << "<text x=\"" << X(v) << "\" y=\"" << kTop + PlotHeight() + 18
           << "\" text-anchor=\"middle\" font-size=\"11\">" << Num(v)
           << "</text>\n";
    }
  }

  void XCategory(double center, const std::string& label) {
    out_ << "<text x=\"" << center << "\" y=\"" << kTop + PlotHeight() + 18
         << "\" text-anchor=\"middle\" font-size=\"11\">" << Escape(label)
         << "</text>\n";
  }

  void Legend(std::size_t index, const std::string& name) {
    const double y = kTop + 10 + 20.0 * index;
    const double x = kWidth - kRight + 15;
    out_ << "<rect x=\"" << x << "\" y=\"" << y - 9 << "\" width=\"12\" "
         << "height=\"12\" fill=\"" << Color(index) << "\"/>\n"
         << "<text x=\"" << x + 18 << "\" y=\"" << y + 2
         << "\" font-size=\"12\">" << Escape(name) << "</text>\n";
  }

  std::ostringstream& out() { return out_; }

  void Save(const std::filesystem::path& path) {
    out_ << "</svg>\n";
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    file << out_.str();
  }

 private:
  void DrawYAxis() {
    out_ << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
         << PlotWidth() << "\" height=\"" << PlotHeight()
         << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 5; ++i) {
      const double v = y_.lo + (y_.hi - y_.lo) * i / 5.0;
      out_ << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + PlotWidth()
           << "\" y1=\"" << Y(v) << "\" y2=\"" << Y(v)
           << "\" stroke=\"#ddd\"/>\n"
           << "<text x=\"" << kLeft - 6 << "\" y=\"" << Y(v) + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << Num(v)
           << "</text>\n";
    }
    if (y_.lo < 0 && y_.hi > 0) {
      out_ << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + PlotWidth()
           << "\" y1=\"" << Y(0) << "\" y2=\"" << Y(0)
           << "\" stroke=\"#333\"/>\n";
    }
  }

  Range x_;
  Range y_;
  std::ostringstream out_;
};

void ErrorBar(std::ostringstream& out, double x, double y_lo, double y_hi) {
  out << "<line x1=\"" << x << "\" x2=\"" << x << "\" y1=\"" << y_lo
      << "\" y2=\"" << y_hi << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << x - 4 << "\" x2=\"" << x + 4 << "\" y1=\"" << y_lo
      << "\" y2=\"" << y_lo << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << x - 4 << "\" x2=\"" << x + 4 << "\" y1=\"" << y_hi
      << "\" y2=\"" << y_hi << "\" stroke=\"black\"/>\n";
}

}  // namespace

void WriteBarChartSvg(const std::filesystem::path& path,
                      const ChartLabels& labels,
                      const std::vector<std::string>& categories,
                      const std::vector<BarSeries>& series) {
  Range y;
  for (const auto& s : series) {
    if (s.values.size() != categories.size()) {
      throw std::invalid_argument("bar series length != category count");
    }
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const double e = s.errors.empty() ? 0.0 : s.errors[i];
      y.Add(s.values[i] - e);
      y.Add(s.values[i] + e);
    }
  }
  y.Finish(/*include_zero=*/true);
  Range x;
  x.Add(0);
  x.Add(static_cast<double>(categories.size()));
  Canvas canvas(labels, x, y);

  const double group = Canvas::PlotWidth() / std::max<std::size_t>(1, categories.size());
  const double bar = 0.8 * group / std::max<std::size_t>(1, series.size());
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double left = canvas.X(static_cast<double>(c)) + 0.1 * group;
    canvas.XCategory(left + 0.4 * group, categories[c]);
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = series[s].values[c];
      const double x0 = left + bar * s;
      const double top = canvas.Y(std::max(v, 0.0));
      const double height = std::abs(canvas.Y(v) - canvas.Y(0.0));
      canvas.out() << "<rect x=\"" << x0 << "\" y=\"" << top << "\" width=\""
                   << bar * 0.95 << "\" height=\"" << height << "\" fill=\""
                   << Color(s) << "\"/>\n";
      if (!series[s].errors.empty()) {
        const double e = series[s].errors[c];
        ErrorBar(canvas.out(), x0 + bar * 0.475, canvas.Y(v - e),
                 canvas.Y(v + e));
      }
    }
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    canvas.Legend(s, series[s].name);
  }
  canvas.Save(path);
}

void WriteLineChartSvg(const std::filesystem::path& path,
                       const ChartLabels& labels,
                       const std::vector<LineSeries>& series) {
  Range x, y;
  for (const auto& s : series) {
    if (s.xs.size() != s.ys.size()) {
      throw std::invalid_argument("line series x/y length mismatch");
    }
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      x.Add(s.xs[i]);
      const double e = s.errors.empty() ? 0.0 : s.errors[i];
      y.Add(s.ys[i] - e);
      y.Add(s.ys[i] + e);
    }
  }
  x.Finish(false);
  y.Finish(false);
  Canvas canvas(labels, x, y);
  canvas.DrawXTicks();
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& line = series[s];
    canvas.out() << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\""
                 << Color(s) << "\" points=\"";
    for (std::size_t i = 0; i < line.xs.size(); ++i) {
      canvas.out() << canvas.X(line.xs[i]) << ',' << canvas.Y(line.ys[i])
                   << ' ';
    }
    canvas.out() << "\"/>\n";
    for (std::size_t i = 0; i < line.xs.size(); ++i) {
      if (!line.errors.empty()) {
        ErrorBar(canvas.out(), canvas.X(line.xs[i]),
                 canvas.Y(line.ys[i] - line.errors[i]),
                 canvas.Y(line.ys[i] + line.errors[i]));
      }
    }
    canvas.Legend(s, line.name);
  }
  canvas.Save(path);
}

void WriteBandChartSvg(const std::filesystem::path& path,
                       const ChartLabels& labels,
                       const std::vector<BandSeries>& bands) {
  Range x, y;
  for (const auto& b : bands) {
    if (b.xs.size() != b.lower.size() || b.xs.size() != b.upper.size()) {
      throw std::invalid_argument("band series length mismatch");
    }
    for (std::size_t i = 0; i < b.xs.size(); ++i) {
      x.Add(b.xs[i]);
      y.Add(b.lower[i]);
      y.Add(b.upper[i]);
    }
  }
  x.Finish(false);
  y.Finish(true);
  Canvas canvas(labels, x, y);
  canvas.DrawXTicks();
  for (std::size_t s = 0; s < bands.size(); ++s) {
    const auto& b = bands[s];
    if (b.xs.empty()) continue;
    // Step outline: each interval holds until the next x.
    std::ostringstream upper, lower;
    for (std::size_t i = 0; i < b.xs.size(); ++i) {
      const double x_end = i + 1 < b.xs.size() ? b.xs[i + 1] : b.xs[i];
      upper << canvas.X(b.xs[i]) << ',' << canvas.Y(b.upper[i]) << ' '
            << canvas.X(x_end) << ',' << canvas.Y(b.upper[i]) << ' ';
    }
    for (std::size_t i = b.xs.size(); i-- > 0;) {
      const double x_end = i + 1 < b.xs.size() ? b.xs[i + 1] : b.xs[i];
      lower << canvas.X(x_end) << ',' << canvas.Y(b.lower[i]) << ' '
            << canvas.X(b.xs[i]) << ',' << canvas.Y(b.lower[i]) << ' ';
    }
    canvas.out() << "<polygon fill=\"" << Color(s)
                 << "\" fill-opacity=\"0.35\" stroke=\"" << Color(s)
                 << "\" stroke-width=\"1.5\" points=\"" << upper.str()
                 << lower.str() << "\"/>\n";
    canvas.Legend(s, b.name);
  }
  canvas.Save(path);
}

}  // namespace quadlab

// Copyright 2026 The stigma-welfare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "stigma/welfare.hpp"

namespace stigma {

// 12 significant digits, the fixed serialization of every CSV value.
inline std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline constexpr const char* kSweepHeader = "tau_hat,S,gap,H,r,R_H,R,W_A,W_B,W";

inline std::string csv_row(const SweepRow& row) {
  std::string out;
  for (double v : {row.tau_hat, row.S, row.gap, row.H, row.r, row.R_H, row.R,
                   row.W_A, row.W_B, row.W}) {
    if (!out.empty()) out += ',';
    out += fmt(v);
  }
  return out;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepHeader) + "\n";
  for (const SweepRow& r : rows) out += csv_row(r) + "\n";
  return out;
}

struct Series {
  std::string name;
  std::vector<double> y;
};

// Static line chart. Output depends only on the data: fixed canvas, fixed
// palette, no timestamps.
inline std::string line_chart_svg(const std::string& title,
                                  const std::string& x_label,
                                  const std::vector<double>& x,
                                  const std::vector<Series>& series) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#ff7f0e", "#9467bd", "#8c564b",
                                   "#17becf", "#7f7f7f"};
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };

  double x_min = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
  double x_max = x.empty() ? 1.0 : *std::max_element(x.begin(), x.end());
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
  for (const Series& s : series) {
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (!std::isfinite(y_min)) y_min = 0.0, y_max = 1.0;
  if (y_max - y_min < 1e-12) y_min -= 0.5, y_max += 0.5;
  if (x_max - x_min < 1e-12) x_max = x_min + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double v) {
    return kTop + (1.0 - (v - y_min) / (y_max - y_min)) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"14\">" << title
      << "</text>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"" << kTop + plot_h + 18 << "\">"
      << num(x_min) << "</text>\n";
  svg << "<text x=\"" << kLeft + plot_w << "\" y=\"" << kTop + plot_h + 18
      << "\" text-anchor=\"end\">" << num(x_max) << "</text>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4
      << "\" text-anchor=\"end\">" << num(y_max) << "</text>\n";
  svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + plot_h
      << "\" text-anchor=\"end\">" << num(y_min) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < std::min(x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      if (!first) svg << ' ';
      svg << num(px(x[i])) << ',' << num(py(s.y[i]));
      first = false;
    }
    svg << "\"/>\n";
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
    svg << "<line x1=\"" << kLeft + plot_w + 10 << "\" y1=\"" << ly - 4
        << "\" x2=\"" << kLeft + plot_w + 30 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kLeft + plot_w + 34 << "\" y=\"" << ly << "\">"
        << s.name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace stigma

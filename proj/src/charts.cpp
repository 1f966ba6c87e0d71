// Copyright 2026 The cogmap Authors
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

#include "cogmap/charts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cogmap/error.hpp"
#include "cogmap/text_format.hpp"

namespace cogmap {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
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

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    } else {
      const double m = 0.05 * (hi - lo);
      lo -= m;
      hi += m;
    }
  }
};

std::string f2(double v) { return format_fixed(v, 2); }

}  // namespace

std::string svg_chart(std::string_view title, std::string_view x_label, std::string_view y_label,
                      const std::vector<ChartSeries>& series) {
  Range xr, yr;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw Error(ErrorCode::kValue, "chart series '" + s.label + "' is ragged");
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.pad();
  yr.pad();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f2(kWidth) + "\" height=\"" +
                    f2(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + f2(kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
         "</text>\n";
  svg += "<line x1=\"" + f2(kLeft) + "\" y1=\"" + f2(kTop + ph) + "\" x2=\"" + f2(kLeft + pw) + "\" y2=\"" +
         f2(kTop + ph) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + f2(kLeft) + "\" y1=\"" + f2(kTop) + "\" x2=\"" + f2(kLeft) + "\" y2=\"" + f2(kTop + ph) +
         "\" stroke=\"black\"/>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / kTicks;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / kTicks;
    svg += "<text x=\"" + f2(px(xv)) + "\" y=\"" + f2(kTop + ph + 16) + "\" text-anchor=\"middle\">" +
           format_fixed(xv, 3) + "</text>\n";
    svg += "<text x=\"" + f2(kLeft - 6) + "\" y=\"" + f2(py(yv) + 4) + "\" text-anchor=\"end\">" +
           format_fixed(yv, 3) + "</text>\n";
    svg += "<line x1=\"" + f2(kLeft) + "\" y1=\"" + f2(py(yv)) + "\" x2=\"" + f2(kLeft + pw) + "\" y2=\"" +
           f2(py(yv)) + "\" stroke=\"#dddddd\"/>\n";
  }
  svg += "<text x=\"" + f2(kLeft + pw / 2) + "\" y=\"" + f2(kHeight - 18) + "\" text-anchor=\"middle\">" +
         escape(x_label) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + f2(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         f2(kTop + ph / 2) + ")\">" + escape(y_label) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    if (s.connect && s.x.size() > 1) {
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i) svg += ' ';
        svg += f2(px(s.x[i])) + "," + f2(py(s.y[i]));
      }
      svg += "\"/>\n";
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg += "<circle cx=\"" + f2(px(s.x[i])) + "\" cy=\"" + f2(py(s.y[i])) + "\" r=\"3\" fill=\"" + color +
             "\"/>\n";
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    svg += "<rect x=\"" + f2(kLeft + pw + 14) + "\" y=\"" + f2(ly - 8) + "\" width=\"10\" height=\"10\" fill=\"" +
           color + "\"/>\n";
    svg += "<text x=\"" + f2(kLeft + pw + 30) + "\" y=\"" + f2(ly + 1) + "\">" + escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace cogmap

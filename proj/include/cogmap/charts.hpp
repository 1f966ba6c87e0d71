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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cogmap {

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool connect = true;  // polyline through the points; false draws markers only
};

/// Self-contained SVG with axes, tick labels, a title and a legend. Output
/// depends only on the arguments.
std::string svg_chart(std::string_view title, std::string_view x_label, std::string_view y_label,
                      const std::vector<ChartSeries>& series);

}  // namespace cogmap

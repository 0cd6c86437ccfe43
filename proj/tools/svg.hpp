// Copyright 2026 The mdis Authors
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

#ifndef MDIS_TOOLS_SVG_HPP
#define MDIS_TOOLS_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace mdis::tools {

// Minimal unit-square plot writer: fixed 800x600 viewBox, gridlines every
// 0.1, a diagonal reference, one polyline and optional point markers.
struct UnitPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> line;    // polyline vertices
  std::vector<std::pair<double, double>> points;  // circle markers
};

void write_unit_plot_svg(const std::string& path, const UnitPlot& plot);

}  // namespace mdis::tools

#endif  // MDIS_TOOLS_SVG_HPP

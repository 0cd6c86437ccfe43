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

#include "svg.hpp"

#include <fstream>
#include <iomanip>

#include "mdis/errors.hpp"

namespace mdis::tools {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 60.0;

double px(double x) { return kMargin + x * (kWidth - 2 * kMargin); }
double py(double y) { return kHeight - kMargin - y * (kHeight - 2 * kMargin); }

}  // namespace

void write_unit_plot_svg(const std::string& path, const UnitPlot& plot) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth
      << " " << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  for (int i = 0; i <= 10; ++i) {
    double t = i / 10.0;
    out << "<line x1=\"" << px(t) << "\" y1=\"" << py(0) << "\" x2=\"" << px(t)
        << "\" y2=\"" << py(1) << "\" stroke=\"#dddddd\"/>\n";
    out << "<line x1=\"" << px(0) << "\" y1=\"" << py(t) << "\" x2=\"" << px(1)
        << "\" y2=\"" << py(t) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << px(t) << "\" y=\"" << kHeight - kMargin + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << t << "</text>\n";
    out << "<text x=\"" << kMargin - 10 << "\" y=\"" << py(t) + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << t << "</text>\n";
  }
  out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1)
      << "\" y2=\"" << py(1) << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"6 4\"/>\n";

  if (!plot.line.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : plot.line) out << px(x) << "," << py(y) << " ";
    out << "\"/>\n";
  }
  for (const auto& [x, y] : plot.points) {
    out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
        << "\" r=\"4\" fill=\"#c03a2b\"/>\n";
  }

  out << "<text x=\"" << kWidth / 2 << "\" y=\"30\" font-size=\"18\" "
      << "text-anchor=\"middle\">" << plot.title << "</text>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15
      << "\" font-size=\"14\" text-anchor=\"middle\">" << plot.x_label
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << kHeight / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kHeight / 2 << ")\">" << plot.y_label << "</text>\n";
  out << "</svg>\n";
  if (!out) throw Error("write failed: " + path);
}

}  // namespace mdis::tools

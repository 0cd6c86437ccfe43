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

#include "minicorpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "mdis/errors.hpp"
#include "mdis/image.hpp"

namespace mdis::tools {

namespace {

struct Patch {
  int x = 0, y = 0, side = 0;
};

// Smooth sinusoidal background with textured square patches.
Matrix scene(int width, int height, const std::vector<Patch>& patches,
             double noise_amp, std::mt19937& rng) {
  Matrix m(height, width);
  std::uniform_real_distribution<double> phase(0.0, 6.28);
  double ph = phase(rng);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      m(y, x) = 0.5 + 0.2 * std::sin(2.0 * M_PI * x / width + ph) *
                          std::cos(2.0 * M_PI * y / height);
    }
  }
  std::uniform_real_distribution<double> noise(-noise_amp, noise_amp);
  for (const Patch& p : patches) {
    for (int y = p.y; y < p.y + p.side && y < height; ++y) {
      for (int x = p.x; x < p.x + p.side && x < width; ++x) {
        m(y, x) = std::clamp(0.5 + noise(rng), 0.0, 1.0);
      }
    }
  }
  return m;
}

}  // namespace

std::string write_minicorpus(const std::string& out_dir, unsigned seed) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::mt19937 rng(seed);

  struct Spec {
    int width, height;
    std::vector<Patch> patches;
  };
  const std::vector<Spec> specs = {
      {256, 256, {{96, 96, 48}}},
      {200, 150, {{30, 40, 32}, {140, 90, 24}}},
      {320, 240, {{220, 60, 40}}},
      {128, 128, {{16, 72, 32}}},
      {256, 192, {{60, 30, 28}, {170, 120, 36}}},
  };

  fs::path csv_path = fs::path(out_dir) / "fixations.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw Error("cannot open for writing: " + csv_path.string());
  csv << "image,subject,x,y\n";

  std::normal_distribution<double> jitter(0.0, 6.0);
  std::uniform_real_distribution<double> uniform01(0.0, 1.0);

  for (size_t i = 0; i < specs.size(); ++i) {
    const Spec& sp = specs[i];
    std::string stem = "img0" + std::to_string(i + 1);
    Matrix img = scene(sp.width, sp.height, sp.patches, 0.35, rng);
    write_png16((fs::path(out_dir) / (stem + ".png")).string(), img);

    // Four synthetic observers: most fixations on the patches, some strays.
    for (int s = 0; s < 4; ++s) {
      for (int k = 0; k < 12; ++k) {
        double x, y;
        if (uniform01(rng) < 0.8) {
          const Patch& p = sp.patches[k % sp.patches.size()];
          x = p.x + p.side / 2.0 + jitter(rng);
          y = p.y + p.side / 2.0 + jitter(rng);
        } else {
          x = uniform01(rng) * (sp.width - 1);
          y = uniform01(rng) * (sp.height - 1);
        }
        x = std::clamp(x, 0.0, sp.width - 1.0);
        y = std::clamp(y, 0.0, sp.height - 1.0);
        csv << stem << ",s" << s << "," << std::lround(x) << ","
            << std::lround(y) << "\n";
      }
    }
  }
  return csv_path.string();
}

}  // namespace mdis::tools

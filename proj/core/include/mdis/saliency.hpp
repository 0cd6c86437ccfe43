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

#ifndef MDIS_SALIENCY_HPP
#define MDIS_SALIENCY_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mdis/image.hpp"
#include "mdis/labeltree.hpp"

namespace mdis {

// Mode naming: model letter (u/t/v) + block-scale selector. Selector 0 is
// the max-fused map, 1..5 are single block scales 32x32 down to 2x2, and 6
// is the emission-only 2x2 map standing in for single-window saliency.
struct ModeConfig {
  enum class Model { Universal, Trained, Vector };
  Model model = Model::Universal;
  int scale = 0;
};

std::optional<ModeConfig> parse_mode(const std::string& name);
std::string mode_name(const ModeConfig& cfg);

struct SaliencyMap {
  Matrix values;  // normalized to [0,1], cropped to the input extent
  std::string mode;
};

struct SaliencyOptions {
  int depth = 5;
  int min_side = 64;
  int em_max_iter = 50;
  double em_tol = 1e-5;
  bool parallel_bands = true;   // train the three band models concurrently
  double coeff_scale = 255.0;   // model units per luminance unit
};

// Entropy of the empirical label frequency, in nats; at most ln 2.
double class_entropy(const LabelGrid& labels);

// I = H(C) + p log p + (1-p) log(1-p), clamped below at zero.
double block_mi(double posterior_centre, double class_entropy);

// Paints each block of a level-j grid over its 2^j x 2^j pixel square.
Matrix saliency_at_scale(const Matrix& grid, int level);

// Pixel-wise maximum across same-sized maps.
Matrix fuse_max(std::span<const Matrix> maps);

// Affine rescale to [0,1]; constant maps become all 0.5.
Matrix normalize01(const Matrix& map);

// Per-band scalar parameter sets (all equal in universal mode).
struct ScalarBandModel {
  std::array<ScalarHmtParams, 3> band;
};
using PipelineModel = std::variant<ScalarBandModel, VectorHmtParams>;

// Universal constants or per-image EM training on the pyramid.
PipelineModel fit_model(const WaveletPyramid& pyr, ModeConfig::Model kind,
                        const SaliencyOptions& opts);

// Everything between the transform and the map: block log-likelihoods,
// priors, the label cascade, per-scale entropies and the MI block grids.
struct SaliencyStages {
  std::vector<ScaleLoglik> logliks;  // index level-1
  LevelPriors priors;
  CascadeResult cascade;
  std::vector<double> entropy;  // H(C^j)
  std::vector<Matrix> mi;       // block grids, index level-1
};
SaliencyStages run_stages(const WaveletPyramid& pyr,
                          const PipelineModel& model,
                          const SaliencyOptions& opts);

// Emission-only finest-scale saliency (the 2x2-block single-window mode).
struct PseudoDisResult {
  Matrix mi_grid;  // level-1 block grid
  LabelGrid labels;
  double entropy = 0.0;
};
PseudoDisResult pseudo_dis(const WaveletPyramid& pyr,
                           const PipelineModel& model,
                           const SaliencyOptions& opts);

// Paints and, for selector 0, max-fuses the MI grids into a full-resolution
// map in nats (not yet normalized).
Matrix select_map(const SaliencyStages& stages, int selector, int depth);

struct SaliencyResult {
  SaliencyMap map;
  CropWindow window;
  WaveletPyramid pyramid;           // transform-unit coefficients
  SaliencyStages stages;            // empty for scale selector 6
  std::optional<PseudoDisResult> pseudo;  // set for scale selector 6
};

// Full pipeline: luminance, padding, transform, model, inference, cascade,
// MI, scale selection, normalization and cropping. Deterministic.
SaliencyResult compute_saliency_detailed(const RawImage& img,
                                         const ModeConfig& cfg,
                                         const SaliencyOptions& opts = {});
SaliencyMap compute_saliency(const RawImage& img, const ModeConfig& cfg,
                             const SaliencyOptions& opts = {});

// Float dump: 16-byte header (magic "MDISMAP1", u32 width, u32 height,
// little-endian) followed by row-major float32 values.
void dump_map_float(const std::string& path, const Matrix& map);

}  // namespace mdis

#endif  // MDIS_SALIENCY_HPP

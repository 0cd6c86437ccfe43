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

#ifndef MDIS_WAVELET_HPP
#define MDIS_WAVELET_HPP

#include <array>
#include <string>
#include <vector>

#include "mdis/image.hpp"
#include "mdis/matrix.hpp"

namespace mdis {

enum class Band : int { LH = 0, HL = 1, HH = 2 };

inline constexpr std::array<Band, 3> kBands = {Band::LH, Band::HL, Band::HH};

// Address of one detail coefficient. Levels count from the finest:
// level 1 coefficients correspond to 2x2 pixel blocks, level j to 2^j x 2^j.
struct NodeIndex {
  int level = 1;
  int row = 0;
  int col = 0;
  Band band = Band::LH;
};

struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;
};

// Orthonormal 2-D Haar decomposition. The LL residual is kept only for
// reconstruction and energy checks; the model stages never look at it.
class WaveletPyramid {
 public:
  WaveletPyramid() = default;
  WaveletPyramid(int image_side, int depth);

  int image_side() const { return image_side_; }
  int depth() const { return depth_; }
  // Side of a band matrix at the given level.
  int level_side(int level) const { return image_side_ >> level; }

  const Matrix& band(Band b, int level) const {
    return bands_[static_cast<int>(b)][level - 1];
  }
  Matrix& band(Band b, int level) {
    return bands_[static_cast<int>(b)][level - 1];
  }
  const Matrix& ll() const { return ll_; }
  Matrix& ll() { return ll_; }

 private:
  int image_side_ = 0;
  int depth_ = 0;
  std::array<std::vector<Matrix>, 3> bands_;
  Matrix ll_;
};

// Separable orthonormal Haar analysis. depth must satisfy 2^depth <= side.
WaveletPyramid dwt2_haar(const LuminanceImage& img, int depth);

// Exact inverse; round trip is bit-accurate modulo ~1e-15 arithmetic noise.
Matrix idwt2_haar(const WaveletPyramid& pyr);

// Quad-tree navigation. parent_of throws for level >= depth,
// children_of throws for level 1.
NodeIndex parent_of(const NodeIndex& n, int depth);
std::array<NodeIndex, 4> children_of(const NodeIndex& n);

// Pixel square covered by a node: side 2^level at offset 2^level * (col,row).
PixelRect block_of(const NodeIndex& n);

// Debug dump: 16-byte header (magic "MDISWAV1", u32 depth, u32 side,
// little-endian) followed by float32 planes, finest level first, bands in
// LH, HL, HH order, then the LL residual.
void dump_pyramid(const std::string& path, const WaveletPyramid& pyr);

}  // namespace mdis

#endif  // MDIS_WAVELET_HPP

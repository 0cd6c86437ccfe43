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

#ifndef MDIS_FOREST_HPP
#define MDIS_FOREST_HPP

#include <array>
#include <vector>

#include "mdis/hmt.hpp"
#include "mdis/wavelet.hpp"

namespace mdis {

// Explicit quad-tree forest over wavelet coefficients. Nodes are stored
// coarsest level first so a parent always precedes its children; tests may
// build irregular shapes (fewer than four children) through add_node.
template <typename ValueT>
struct Forest {
  struct Node {
    ValueT value{};
    int level = 1;                       // 1 = finest
    int parent = -1;                     // -1 for roots
    std::array<int, 4> children = {-1, -1, -1, -1};
    int n_children = 0;
  };

  int levels = 0;
  std::vector<Node> nodes;
  std::vector<int> roots;
  // Node ids per level (index level-1), grid row-major for pyramid forests.
  std::vector<std::vector<int>> by_level;

  int add_node(int level, int parent, const ValueT& value) {
    int id = static_cast<int>(nodes.size());
    Node n;
    n.value = value;
    n.level = level;
    n.parent = parent;
    nodes.push_back(n);
    if (parent < 0) {
      roots.push_back(id);
    } else {
      Node& p = nodes[parent];
      p.children[p.n_children++] = id;
    }
    if (level > levels) levels = level;
    if (static_cast<int>(by_level.size()) < level) by_level.resize(level);
    by_level[level - 1].push_back(id);
    return id;
  }
};

using ScalarForest = Forest<double>;
using VectorForest = Forest<Vec3>;

// One band's coefficients as a forest rooted at the coarsest level. The
// scale factor converts transform units into model units (the universal
// constants assume 8-bit intensities, so the pipeline passes 255).
ScalarForest forest_from_band(const WaveletPyramid& pyr, Band band,
                              double scale = 1.0);

// All three bands stacked into (LH, HL, HH) vectors, one tree per location.
VectorForest forest_from_pyramid(const WaveletPyramid& pyr,
                                 double scale = 1.0);

}  // namespace mdis

#endif  // MDIS_FOREST_HPP

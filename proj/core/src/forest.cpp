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

#include "mdis/forest.hpp"

namespace mdis {

namespace {

// Builds levels coarsest-to-finest so parents precede children, while
// keeping by_level grids in row-major order.
template <typename ValueT, typename Fetch>
Forest<ValueT> build(const WaveletPyramid& pyr, Fetch fetch) {
  Forest<ValueT> f;
  int depth = pyr.depth();
  size_t total = 0;
  for (int j = 1; j <= depth; ++j) {
    size_t s = static_cast<size_t>(pyr.level_side(j));
    total += s * s;
  }
  f.nodes.reserve(total);

  std::vector<int> parent_ids;  // level j+1 grid, row-major
  for (int j = depth; j >= 1; --j) {
    int side = pyr.level_side(j);
    std::vector<int> ids(static_cast<size_t>(side) * side);
    for (int r = 0; r < side; ++r) {
      for (int c = 0; c < side; ++c) {
        int parent = -1;
        if (j < depth) parent = parent_ids[(r / 2) * (side / 2) + (c / 2)];
        ids[static_cast<size_t>(r) * side + c] =
            f.add_node(j, parent, fetch(j, r, c));
      }
    }
    parent_ids = std::move(ids);
  }
  return f;
}

}  // namespace

ScalarForest forest_from_band(const WaveletPyramid& pyr, Band band,
                              double scale) {
  return build<double>(pyr, [&](int j, int r, int c) {
    return scale * pyr.band(band, j)(r, c);
  });
}

VectorForest forest_from_pyramid(const WaveletPyramid& pyr, double scale) {
  return build<Vec3>(pyr, [&](int j, int r, int c) {
    return Vec3{scale * pyr.band(Band::LH, j)(r, c),
                scale * pyr.band(Band::HL, j)(r, c),
                scale * pyr.band(Band::HH, j)(r, c)};
  });
}

}  // namespace mdis

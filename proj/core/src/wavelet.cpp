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

#include "mdis/wavelet.hpp"

#include <cstring>
#include <fstream>

#include "mdis/errors.hpp"

namespace mdis {

WaveletPyramid::WaveletPyramid(int image_side, int depth)
    : image_side_(image_side), depth_(depth) {
  for (auto& levels : bands_) {
    levels.reserve(depth);
    for (int j = 1; j <= depth; ++j) {
      levels.emplace_back(image_side >> j, image_side >> j);
    }
  }
  ll_ = Matrix(image_side >> depth, image_side >> depth);
}

WaveletPyramid dwt2_haar(const LuminanceImage& img, int depth) {
  int side = img.side();
  if (depth < 1 || (side >> depth) < 1 || (side >> depth) << depth != side) {
    throw Error("dwt2_haar: depth too large for image side");
  }

  WaveletPyramid pyr(side, depth);
  Matrix work = img.values;
  for (int j = 1; j <= depth; ++j) {
    int half = side >> j;
    Matrix next(half, half);
    Matrix& lh = pyr.band(Band::LH, j);
    Matrix& hl = pyr.band(Band::HL, j);
    Matrix& hh = pyr.band(Band::HH, j);
    for (int r = 0; r < half; ++r) {
      for (int c = 0; c < half; ++c) {
        double a = work(2 * r, 2 * c);
        double b = work(2 * r, 2 * c + 1);
        double cc = work(2 * r + 1, 2 * c);
        double d = work(2 * r + 1, 2 * c + 1);
        next(r, c) = 0.5 * (a + b + cc + d);
        lh(r, c) = 0.5 * (a + b - cc - d);  // vertical highpass
        hl(r, c) = 0.5 * (a - b + cc - d);  // horizontal highpass
        hh(r, c) = 0.5 * (a - b - cc + d);
      }
    }
    work = std::move(next);
  }
  pyr.ll() = std::move(work);
  return pyr;
}

Matrix idwt2_haar(const WaveletPyramid& pyr) {
  Matrix work = pyr.ll();
  for (int j = pyr.depth(); j >= 1; --j) {
    int half = pyr.image_side() >> j;
    const Matrix& lh = pyr.band(Band::LH, j);
    const Matrix& hl = pyr.band(Band::HL, j);
    const Matrix& hh = pyr.band(Band::HH, j);
    if (work.rows() != half || lh.rows() != half || hl.rows() != half ||
        hh.rows() != half) {
      throw Error("idwt2_haar: inconsistent band shapes");
    }
    Matrix up(half * 2, half * 2);
    for (int r = 0; r < half; ++r) {
      for (int c = 0; c < half; ++c) {
        double ll = work(r, c);
        double v = lh(r, c);
        double h = hl(r, c);
        double d = hh(r, c);
        up(2 * r, 2 * c) = 0.5 * (ll + v + h + d);
        up(2 * r, 2 * c + 1) = 0.5 * (ll + v - h - d);
        up(2 * r + 1, 2 * c) = 0.5 * (ll - v + h - d);
        up(2 * r + 1, 2 * c + 1) = 0.5 * (ll - v - h + d);
      }
    }
    work = std::move(up);
  }
  return work;
}

NodeIndex parent_of(const NodeIndex& n, int depth) {
  if (n.level >= depth) throw Error("parent_of: node is at the root level");
  return NodeIndex{n.level + 1, n.row / 2, n.col / 2, n.band};
}

std::array<NodeIndex, 4> children_of(const NodeIndex& n) {
  if (n.level <= 1) throw Error("children_of: node is at the leaf level");
  int j = n.level - 1;
  return {NodeIndex{j, 2 * n.row, 2 * n.col, n.band},
          NodeIndex{j, 2 * n.row, 2 * n.col + 1, n.band},
          NodeIndex{j, 2 * n.row + 1, 2 * n.col, n.band},
          NodeIndex{j, 2 * n.row + 1, 2 * n.col + 1, n.band}};
}

PixelRect block_of(const NodeIndex& n) {
  int s = 1 << n.level;
  return PixelRect{s * n.col, s * n.row, s, s};
}

namespace {

void put_u32le(std::ofstream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void put_plane(std::ofstream& out, const Matrix& m) {
  std::vector<float> row(m.cols());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) row[c] = static_cast<float>(m(r, c));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
}

}  // namespace

void dump_pyramid(const std::string& path, const WaveletPyramid& pyr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out.write("MDISWAV1", 8);
  put_u32le(out, static_cast<std::uint32_t>(pyr.depth()));
  put_u32le(out, static_cast<std::uint32_t>(pyr.image_side()));
  for (int j = 1; j <= pyr.depth(); ++j) {
    for (Band b : kBands) put_plane(out, pyr.band(b, j));
  }
  put_plane(out, pyr.ll());
  if (!out) throw Error("write failed: " + path);
}

}  // namespace mdis

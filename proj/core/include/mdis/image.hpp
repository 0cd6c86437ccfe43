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

#ifndef MDIS_IMAGE_HPP
#define MDIS_IMAGE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mdis/matrix.hpp"

namespace mdis {

// Decoded 8-bit RGB raster, row-major, 3 bytes per pixel.
struct RawImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  std::uint8_t at(int y, int x, int ch) const {
    return rgb[(static_cast<size_t>(y) * width + x) * 3 + ch];
  }
};

// Square luminance image with power-of-two side, values in [0,1].
struct LuminanceImage {
  Matrix values;
  int side() const { return values.rows(); }
};

// Records where the original image sits inside the padded square.
struct CropWindow {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;
};

// Reads an 8-bit PNG (grayscale or RGB, alpha dropped) or a binary PPM (P6).
// Throws FileNotFoundError / UnsupportedFormatError / CorruptDataError.
RawImage load_image(const std::string& path);

// BT.601 luma, scaled to [0,1].
Matrix to_luminance(const RawImage& img);

// Pads with edge reflection to the smallest power-of-two square that holds
// the input and is at least min_side wide. min_side must be a power of two
// >= 64. Original content stays at offset (0,0).
std::pair<LuminanceImage, CropWindow> pad_to_dyadic(const Matrix& lum,
                                                    int min_side = 64);

// Cuts the original-image extent back out of a padded-square result.
Matrix crop_map(const Matrix& map, const CropWindow& win);

// 16-bit grayscale PNG, value = round(65535 * clamp(v, 0, 1)).
void write_png16(const std::string& path, const Matrix& values);

// Binary PGM (P5), labels rendered as 0/255.
void write_pgm(const std::string& path, const LabelGrid& labels);

}  // namespace mdis

#endif  // MDIS_IMAGE_HPP

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

#include "mdis/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>

#include "mdis/errors.hpp"

namespace mdis {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp, png_const_charp msg) {
  throw CorruptDataError(std::string("png: ") + msg);
}

void png_warn_fn(png_structp, png_const_charp) {}

RawImage load_png(const std::string& path, FilePtr file) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           png_error_fn, png_warn_fn);
  if (!png) throw Error("png: allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("png: allocation failed");
  }

  RawImage out;
  try {
    png_init_io(png, file.get());
    png_read_info(png, info);

    png_uint_32 width = png_get_image_width(png, info);
    png_uint_32 height = png_get_image_height(png, info);

    // Normalize every variant libpng can hand us to 8-bit RGB.
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    int color_type = png_get_color_type(png, info);
    if (color_type == PNG_COLOR_TYPE_GRAY ||
        color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(png);
    }
    png_read_update_info(png, info);

    if (png_get_channels(png, info) != 3 || png_get_bit_depth(png, info) != 8) {
      throw UnsupportedFormatError("png: unsupported pixel layout in " + path);
    }

    out.width = static_cast<int>(width);
    out.height = static_cast<int>(height);
    out.rgb.resize(static_cast<size_t>(width) * height * 3);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y) {
      rows[y] = out.rgb.data() + static_cast<size_t>(y) * width * 3;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

RawImage load_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError(path);

  auto next_token = [&in, &path]() -> std::string {
    std::string tok;
    // Skip whitespace and '#' comment lines.
    int c = in.get();
    while (c != EOF && (std::isspace(c) || c == '#')) {
      if (c == '#') {
        while (c != EOF && c != '\n') c = in.get();
      }
      c = in.get();
    }
    while (c != EOF && !std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      c = in.get();
    }
    if (tok.empty()) throw CorruptDataError("ppm: truncated header in " + path);
    return tok;
  };

  std::string magic = next_token();
  if (magic != "P6") {
    throw UnsupportedFormatError("ppm: only binary P6 supported, got '" +
                                 magic + "' in " + path);
  }
  long width = 0, height = 0, maxval = 0;
  try {
    width = std::stol(next_token());
    height = std::stol(next_token());
    maxval = std::stol(next_token());
  } catch (const std::logic_error&) {
    throw CorruptDataError("ppm: malformed header in " + path);
  }
  if (width <= 0 || height <= 0) {
    throw CorruptDataError("ppm: bad dimensions in " + path);
  }
  if (maxval <= 0 || maxval > 255) {
    throw UnsupportedFormatError("ppm: only 8-bit maxval supported in " + path);
  }

  RawImage out;
  out.width = static_cast<int>(width);
  out.height = static_cast<int>(height);
  out.rgb.resize(static_cast<size_t>(width) * height * 3);
  in.read(reinterpret_cast<char*>(out.rgb.data()),
          static_cast<std::streamsize>(out.rgb.size()));
  if (in.gcount() != static_cast<std::streamsize>(out.rgb.size())) {
    throw CorruptDataError("ppm: truncated pixel data in " + path);
  }
  if (maxval != 255) {
    for (auto& v : out.rgb) {
      v = static_cast<std::uint8_t>(v * 255L / maxval);
    }
  }
  return out;
}

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

RawImage load_image(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw FileNotFoundError(path);

  unsigned char sig[8] = {};
  size_t got = std::fread(sig, 1, sizeof(sig), file.get());
  std::rewind(file.get());
  if (got >= 8 && png_sig_cmp(sig, 0, 8) == 0) {
    return load_png(path, std::move(file));
  }
  if (got >= 2 && sig[0] == 'P' && sig[1] == '6') {
    file.reset();
    return load_ppm(path);
  }
  throw UnsupportedFormatError("not a PNG or binary PPM file: " + path);
}

Matrix to_luminance(const RawImage& img) {
  Matrix lum(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double v = 0.299 * img.at(y, x, 0) + 0.587 * img.at(y, x, 1) +
                 0.114 * img.at(y, x, 2);
      lum(y, x) = v / 255.0;
    }
  }
  return lum;
}

std::pair<LuminanceImage, CropWindow> pad_to_dyadic(const Matrix& lum,
                                                    int min_side) {
  if (lum.empty()) throw Error("pad_to_dyadic: empty input");
  if (min_side < 64 || !is_pow2(min_side)) {
    throw Error("pad_to_dyadic: min_side must be a power of two >= 64");
  }
  int side = min_side;
  while (side < lum.rows() || side < lum.cols()) side *= 2;

  // Edge-inclusive reflection: ... 77 78 79 | 79 78 77 ...
  auto reflect = [](int n, int size) {
    int period = 2 * size;
    n %= period;
    return n < size ? n : period - 1 - n;
  };

  LuminanceImage out;
  out.values = Matrix(side, side);
  for (int y = 0; y < side; ++y) {
    int sy = reflect(y, lum.rows());
    for (int x = 0; x < side; ++x) {
      out.values(y, x) = lum(sy, reflect(x, lum.cols()));
    }
  }
  return {std::move(out), CropWindow{0, 0, lum.cols(), lum.rows()}};
}

Matrix crop_map(const Matrix& map, const CropWindow& win) {
  if (win.x0 < 0 || win.y0 < 0 || win.w <= 0 || win.h <= 0 ||
      win.x0 + win.w > map.cols() || win.y0 + win.h > map.rows()) {
    throw Error("crop_map: window out of bounds");
  }
  Matrix out(win.h, win.w);
  for (int y = 0; y < win.h; ++y) {
    for (int x = 0; x < win.w; ++x) {
      out(y, x) = map(win.y0 + y, win.x0 + x);
    }
  }
  return out;
}

void write_png16(const std::string& path, const Matrix& values) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error("cannot open for writing: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            png_error_fn, png_warn_fn);
  if (!png) throw Error("png: allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("png: allocation failed");
  }

  try {
    png_init_io(png, file.get());
    png_set_IHDR(png, info, values.cols(), values.rows(), 16,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<std::uint8_t> row(static_cast<size_t>(values.cols()) * 2);
    for (int y = 0; y < values.rows(); ++y) {
      for (int x = 0; x < values.cols(); ++x) {
        double v = std::clamp(values(y, x), 0.0, 1.0);
        auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
        row[2 * x] = static_cast<std::uint8_t>(q >> 8);  // network byte order
        row[2 * x + 1] = static_cast<std::uint8_t>(q & 0xff);
      }
      png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
}

void write_pgm(const std::string& path, const LabelGrid& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << "P5\n" << labels.cols() << " " << labels.rows() << "\n255\n";
  for (int r = 0; r < labels.rows(); ++r) {
    for (int c = 0; c < labels.cols(); ++c) {
      out.put(labels(r, c) ? static_cast<char>(255) : 0);
    }
  }
  if (!out) throw Error("write failed: " + path);
}

}  // namespace mdis

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

#include "mdis/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mdis/errors.hpp"

namespace mdis {

namespace {

constexpr int kThresholdLevels = 256;  // uniform on [0,1]

struct Pixel {
  int x = 0;
  int y = 0;
};

Pixel to_pixel(const Fixation& f, int width, int height) {
  Pixel p{static_cast<int>(std::lround(f.x)), static_cast<int>(std::lround(f.y))};
  if (p.x < 0 || p.x >= width || p.y < 0 || p.y >= height) {
    throw Error("fixation out of image bounds");
  }
  return p;
}

// Deduplicated fixated-pixel mask.
LabelGrid positive_mask(const Matrix& s, const FixationSet& fx) {
  LabelGrid mask(s.rows(), s.cols());
  for (const auto& [subject, pts] : fx.by_subject) {
    for (const Fixation& f : pts) {
      Pixel p = to_pixel(f, s.cols(), s.rows());
      mask(p.y, p.x) = 1;
    }
  }
  return mask;
}

// Number of thresholds i/(levels-1), i = 0..levels-1, that s passes.
int threshold_rank(double s) {
  int lo = 0, hi = kThresholdLevels;  // invariant: passes lo, fails hi
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    double t = static_cast<double>(mid) / (kThresholdLevels - 1);
    (s >= t ? lo : hi) = mid;
  }
  return s >= 0.0 ? lo + 1 : 0;
}

RocCurve roc_from_positives(const Matrix& s, const LabelGrid& positives) {
  size_t n_pos = 0;
  for (int y = 0; y < s.rows(); ++y) {
    for (int x = 0; x < s.cols(); ++x) n_pos += positives(y, x);
  }
  size_t n_neg = s.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error("roc: need at least one fixated and one background pixel");
  }

  // Count per threshold rank, then sweep from the highest threshold down.
  std::vector<size_t> pos_at(kThresholdLevels + 1, 0);
  std::vector<size_t> all_at(kThresholdLevels + 1, 0);
  for (int y = 0; y < s.rows(); ++y) {
    for (int x = 0; x < s.cols(); ++x) {
      int rank = threshold_rank(s(y, x));
      all_at[rank] += 1;
      if (positives(y, x)) pos_at[rank] += 1;
    }
  }

  RocCurve curve;
  curve.points.reserve(kThresholdLevels + 2);
  curve.points.emplace_back(0.0, 0.0);  // +inf sentinel
  size_t tp = 0, pp = 0;
  for (int rank = kThresholdLevels; rank >= 1; --rank) {
    tp += pos_at[rank];
    pp += all_at[rank];
    curve.points.emplace_back(
        static_cast<double>(pp - tp) / static_cast<double>(n_neg),
        static_cast<double>(tp) / static_cast<double>(n_pos));
  }
  curve.points.emplace_back(1.0, 1.0);  // -inf sentinel
  return curve;
}

}  // namespace

size_t FixationSet::total_fixations() const {
  size_t n = 0;
  for (const auto& [subject, pts] : by_subject) n += pts.size();
  return n;
}

std::vector<Fixation> FixationSet::pooled() const {
  std::vector<Fixation> out;
  out.reserve(total_fixations());
  for (const auto& [subject, pts] : by_subject) {
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

std::map<std::string, FixationSet> load_fixations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path);
  std::string line;
  if (!std::getline(in, line)) throw CorruptDataError("fixations: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "image,subject,x,y") {
    throw CorruptDataError("fixations: expected header image,subject,x,y");
  }

  std::map<std::string, FixationSet> out;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string image, subject, xs, ys;
    if (!std::getline(ss, image, ',') || !std::getline(ss, subject, ',') ||
        !std::getline(ss, xs, ',') || !std::getline(ss, ys)) {
      throw CorruptDataError("fixations: bad row at line " +
                             std::to_string(lineno));
    }
    try {
      Fixation f{std::stod(xs), std::stod(ys)};
      auto& set = out[image];
      set.image_id = image;
      set.by_subject[subject].push_back(f);
    } catch (const std::logic_error&) {
      throw CorruptDataError("fixations: bad coordinates at line " +
                             std::to_string(lineno));
    }
  }
  return out;
}

Matrix density_from_fixations(const FixationSet& fx, int width, int height,
                              double sigma_blur) {
  if (fx.total_fixations() == 0) {
    throw Error("density_from_fixations: no fixations");
  }
  Matrix density(height, width);
  for (const auto& [subject, pts] : fx.by_subject) {
    for (const Fixation& f : pts) {
      Pixel p = to_pixel(f, width, height);
      density(p.y, p.x) += 1.0;
    }
  }

  if (sigma_blur > 1e-12) {
    int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_blur)));
    std::vector<double> kernel(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i) {
      kernel[i + radius] = std::exp(-0.5 * i * i / (sigma_blur * sigma_blur));
    }
    // Separable convolution with zero padding; global renormalization below
    // restores total mass.
    Matrix tmp(height, width);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          int xx = x + i;
          if (xx < 0 || xx >= width) continue;
          acc += kernel[i + radius] * density(y, xx);
        }
        tmp(y, x) = acc;
      }
    }
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          int yy = y + i;
          if (yy < 0 || yy >= height) continue;
          acc += kernel[i + radius] * tmp(yy, x);
        }
        density(y, x) = acc;
      }
    }
  }

  double total = 0.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) total += density(y, x);
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) density(y, x) /= total;
  }
  return density;
}

namespace {

bool is_constant(const Matrix& m) {
  for (size_t i = 1; i < m.size(); ++i) {
    if (m.data()[i] != m.data()[0]) return false;
  }
  return true;
}

}  // namespace

MetricValue lcc(const Matrix& s, const Matrix& g) {
  if (!s.same_shape(g)) throw Error("lcc: dimension mismatch");
  if (is_constant(s) || is_constant(g)) return {0.0, true};
  size_t n = s.size();
  double mean_s = 0.0, mean_g = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_s += s.data()[i];
    mean_g += g.data()[i];
  }
  mean_s /= static_cast<double>(n);
  mean_g /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double ds = s.data()[i] - mean_s;
    double dg = g.data()[i] - mean_g;
    sxy += ds * dg;
    sxx += ds * ds;
    syy += dg * dg;
  }
  if (sxx <= 0.0 || syy <= 0.0) return {0.0, true};
  return {sxy / std::sqrt(sxx * syy), false};
}

MetricValue nss(const Matrix& s, const FixationSet& fx) {
  if (fx.total_fixations() == 0) throw Error("nss: no fixations");
  if (is_constant(s)) return {0.0, true};
  size_t n = s.size();
  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) mean += s.data()[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = s.data()[i] - mean;
    var += d * d;
  }
  var /= static_cast<double>(n);
  if (var <= 1e-30) return {0.0, true};
  double inv_std = 1.0 / std::sqrt(var);

  double acc = 0.0;
  size_t count = 0;
  for (const auto& [subject, pts] : fx.by_subject) {
    for (const Fixation& f : pts) {
      Pixel p = to_pixel(f, s.cols(), s.rows());
      acc += (s(p.y, p.x) - mean) * inv_std;
      ++count;
    }
  }
  return {acc / static_cast<double>(count), false};
}

RocCurve roc(const Matrix& s, const FixationSet& fx) {
  return roc_from_positives(s, positive_mask(s, fx));
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (size_t i = 1; i < curve.points.size(); ++i) {
    double dx = curve.points[i].first - curve.points[i - 1].first;
    area += dx * 0.5 * (curve.points[i].second + curve.points[i - 1].second);
  }
  return area;
}

IsrocResult isroc(const Matrix& model_map, const FixationSet& fx,
                  double sigma_blur) {
  if (fx.by_subject.size() < 2) {
    throw Error("isroc: needs at least two subjects");
  }
  IsrocResult out;
  int runs = 0;
  for (const auto& [held_out, pts] : fx.by_subject) {
    if (pts.empty()) continue;
    FixationSet others;
    others.image_id = fx.image_id;
    for (const auto& [subject, spts] : fx.by_subject) {
      if (subject != held_out) others.by_subject[subject] = spts;
    }
    if (others.total_fixations() == 0) continue;

    Matrix predictor = density_from_fixations(others, model_map.cols(),
                                              model_map.rows(), sigma_blur);
    // Rescale to [0,1] so the fixed threshold grid applies.
    double hi = 0.0;
    for (size_t i = 0; i < predictor.size(); ++i) {
      hi = std::max(hi, predictor.data()[i]);
    }
    for (size_t i = 0; i < predictor.size(); ++i) predictor.data()[i] /= hi;

    FixationSet held;
    held.image_id = fx.image_id;
    held.by_subject[held_out] = pts;
    out.inter_subject_auc += auc(roc(predictor, held));
    ++runs;
  }
  if (runs == 0) throw Error("isroc: no usable leave-one-out split");
  out.inter_subject_auc /= static_cast<double>(runs);
  out.model_auc = auc(roc(model_map, fx));
  return out;
}

}  // namespace mdis

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

#ifndef MDIS_METRICS_HPP
#define MDIS_METRICS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mdis/matrix.hpp"

namespace mdis {

struct Fixation {
  double x = 0.0;
  double y = 0.0;
};

// Eye-fixation ground truth for one image, grouped by subject.
struct FixationSet {
  std::string image_id;
  std::map<std::string, std::vector<Fixation>> by_subject;

  size_t total_fixations() const;
  std::vector<Fixation> pooled() const;
};

// CSV with header image,subject,x,y; one fixation per row, pixel units.
std::map<std::string, FixationSet> load_fixations_csv(const std::string& path);

// Impulses at every subject's fixations blurred by an isotropic Gaussian
// (std sigma_blur pixels, sigma 0 keeps the deltas) and normalized to sum 1.
Matrix density_from_fixations(const FixationSet& fx, int width, int height,
                              double sigma_blur = 8.0);

// Metric values carry a degenerate flag when an input was constant and the
// declared fallback value (0) was returned.
struct MetricValue {
  double value = 0.0;
  bool degenerate = false;
};

// Pearson linear correlation over pixels.
MetricValue lcc(const Matrix& s, const Matrix& g);

// Mean of the zero-mean unit-std standardized map at fixation pixels.
MetricValue nss(const Matrix& s, const FixationSet& fx);

// Threshold sweep at 256 uniform levels on [0,1] plus infinity sentinels;
// positives are the deduplicated fixated pixels.
struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (FPR, TPR), (0,0)..(1,1)
};
RocCurve roc(const Matrix& s, const FixationSet& fx);
double auc(const RocCurve& curve);

// Harel-style inter-subject agreement: leave-one-subject-out density as
// predictor of the held-out subject, versus the model map on all fixations.
struct IsrocResult {
  double inter_subject_auc = 0.0;
  double model_auc = 0.0;
};
IsrocResult isroc(const Matrix& model_map, const FixationSet& fx,
                  double sigma_blur = 8.0);

}  // namespace mdis

#endif  // MDIS_METRICS_HPP

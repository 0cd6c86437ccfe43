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

#ifndef MDIS_INTERNAL_EMISSION_HPP
#define MDIS_INTERNAL_EMISSION_HPP

#include <array>
#include <vector>

#include "mdis/hmt.hpp"

namespace mdis::internal {

// Per-(level, state) caches for the zero-mean emission log-densities,
// shared by the upward sweep and the EM passes.

class ScalarEmission {
 public:
  explicit ScalarEmission(const ScalarHmtParams& p);

  std::array<double, 2> log_density(int level, double w) const {
    const auto& hi = half_inv_[level - 1];
    const auto& ln = log_norm_[level - 1];
    double ww = w * w;
    return {ln[0] - ww * hi[0], ln[1] - ww * hi[1]};
  }

 private:
  std::vector<std::array<double, 2>> half_inv_;
  std::vector<std::array<double, 2>> log_norm_;
};

class VectorEmission {
 public:
  explicit VectorEmission(const VectorHmtParams& p);

  std::array<double, 2> log_density(int level, const Vec3& w) const {
    const auto& inv = inv_[level - 1];
    const auto& ln = log_norm_[level - 1];
    std::array<double, 2> out;
    for (int m = 0; m < 2; ++m) {
      const Cov3& iv = inv[m];
      double q = iv.at(0, 0) * w[0] * w[0] + iv.at(1, 1) * w[1] * w[1] +
                 iv.at(2, 2) * w[2] * w[2] +
                 2.0 * (iv.at(0, 1) * w[0] * w[1] + iv.at(0, 2) * w[0] * w[2] +
                        iv.at(1, 2) * w[1] * w[2]);
      out[m] = ln[m] - 0.5 * q;
    }
    return out;
  }

 private:
  std::vector<std::array<Cov3, 2>> inv_;
  std::vector<std::array<double, 2>> log_norm_;
};

}  // namespace mdis::internal

#endif  // MDIS_INTERNAL_EMISSION_HPP

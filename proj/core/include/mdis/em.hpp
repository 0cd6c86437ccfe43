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

#ifndef MDIS_EM_HPP
#define MDIS_EM_HPP

#include <vector>

#include "mdis/forest.hpp"
#include "mdis/hmt.hpp"

namespace mdis {

struct EmOptions {
  int max_iter = 50;
  double tol = 1e-5;  // relative log-likelihood gain
};

struct EmInfo {
  double final_loglik = 0.0;
  std::vector<double> loglik_trace;  // one entry per E-step, non-decreasing
  int iterations = 0;
  bool degenerate = false;  // all-zero input, variances pinned at the floor
};

// Upward-downward EM with tying within scale. params is both the
// initialization and the result; the returned log-likelihood is the one the
// returned parameters achieve. Variances are floored at 1e-8 (covariances
// get a 1e-8 identity ridge) and the (S, L) state order is restored by a
// label swap whenever an M-step inverts it.
EmInfo em_train(const ScalarForest& forest, ScalarHmtParams* params,
                const EmOptions& opts = {});
EmInfo em_train(const VectorForest& forest, VectorHmtParams* params,
                const EmOptions& opts = {});

// Deterministic moment-based initializers: sigma2_S = 0.25 * per-level
// sample variance, sigma2_L = 4x, persistence 0.8, uniform root.
ScalarHmtParams default_scalar_init(const ScalarForest& forest);
VectorHmtParams default_vector_init(const VectorForest& forest);

}  // namespace mdis

#endif  // MDIS_EM_HPP

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

#ifndef MDIS_INFERENCE_HPP
#define MDIS_INFERENCE_HPP

#include <array>
#include <span>
#include <vector>

#include "mdis/forest.hpp"
#include "mdis/hmt.hpp"

namespace mdis {

// Scaled conditional subtree likelihoods, parallel to the forest's nodes:
// beta_i(m) = b[i][m] * exp(log_scale[i]), with max_m b[i][m] = 1.
struct BetaTree {
  std::vector<std::array<double, 2>> b;
  std::vector<double> log_scale;

  // log beta_i(m) for both states.
  std::array<double, 2> log_beta(int node) const;
};

// Per-level state pmf p(S_i = m | theta), index level-1.
struct LevelPriors {
  std::vector<std::array<double, 2>> p;
};

// Leaf-to-root recursion: at a leaf beta is the emission density; at an
// internal node it is the emission times the product over children of the
// transition-mixed child betas. Values are rescaled per node.
BetaTree upward_sweep(const ScalarForest& forest,
                      const ScalarHmtParams& params);
BetaTree upward_sweep(const VectorForest& forest,
                      const VectorHmtParams& params);

// Root pmf propagated towards the leaves through the transition matrices.
LevelPriors level_priors(const ScalarHmtParams& params);
LevelPriors level_priors(const VectorHmtParams& params);

// log f(T_node | theta) = log sum_m beta_node(m) p(S_node = m | theta).
double subtree_loglik(const BetaTree& bt, int node, int level,
                      const LevelPriors& priors);

// Class-conditional block log-likelihood: the product over independent band
// trees (scalar mode) or the single stacked tree (vector mode). Class 0 is
// surround/state S, class 1 is centre/state L.
std::array<double, 2> block_loglik(std::span<const BetaTree* const> trees,
                                   int node);

// argmax over the two class likelihoods, ties resolved to surround.
int ml_label(const std::array<double, 2>& loglik);

}  // namespace mdis

#endif  // MDIS_INFERENCE_HPP

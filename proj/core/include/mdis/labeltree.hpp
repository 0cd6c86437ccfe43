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

#ifndef MDIS_LABELTREE_HPP
#define MDIS_LABELTREE_HPP

#include <array>
#include <vector>

#include "mdis/inference.hpp"
#include "mdis/matrix.hpp"

namespace mdis {

// Class-conditional log-likelihoods of the dyadic blocks at one scale.
struct ScaleLoglik {
  Matrix surround;  // log f(d | c = 0)
  Matrix centre;    // log f(d | c = 1)
};

// Causal context: the parent block's label and the majority label of the
// parent's 8-neighbourhood. Four possible values.
struct ContextState {
  int parent_label = 0;
  int neighbor_majority = 0;
  int index() const { return 2 * parent_label + neighbor_majority; }
};

// p(c | v) per context value; rows are pmfs clamped to [1e-6, 1 - 1e-6].
struct ContextModel {
  std::array<std::array<double, 2>, 4> p = {{{0.5, 0.5},
                                             {0.5, 0.5},
                                             {0.5, 0.5},
                                             {0.5, 0.5}}};
};

// Labels plus centre posteriors for every scale, index level-1.
struct CascadeResult {
  std::vector<LabelGrid> labels;
  std::vector<Matrix> posterior;  // P(c = 1 | d, v)
};

// Context for block (r, c) on the scale-j grid given the scale-j+1 labels.
// Majority ties and out-of-image neighbours fall back to the parent label.
ContextState context_of(const LabelGrid& coarser, int r, int c);

// Posterior P(c | d, v) = softmax(loglik + log p(c | v)); MAP labels with
// ties resolved to surround.
void fuse_scale(const ScaleLoglik& loglik,
                const std::vector<ContextState>& ctx, const ContextModel& cm,
                LabelGrid* labels, Matrix* posterior);

// Self-consistent estimate of p(c | v): alternate fuse_scale with
// re-averaging posteriors per context value until the table settles.
// Context values absent from the grid keep a uniform row.
ContextModel estimate_context_model(const ScaleLoglik& loglik,
                                    const std::vector<ContextState>& ctx,
                                    int max_iter = 20, double tol = 1e-4);

// Coarse-to-fine MAP cascade. The coarsest scale is labelled by maximum
// likelihood with posteriors from the level priors; finer scales estimate a
// context model against the already-labelled coarser grid and fuse.
CascadeResult map_cascade(const std::vector<ScaleLoglik>& logliks,
                          const LevelPriors& priors);

}  // namespace mdis

#endif  // MDIS_LABELTREE_HPP

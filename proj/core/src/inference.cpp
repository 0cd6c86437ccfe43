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

#include "mdis/inference.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>

#include "mdis/errors.hpp"
#include "mdis/internal/emission.hpp"

namespace mdis {

std::array<double, 2> BetaTree::log_beta(int node) const {
  double s = log_scale[node];
  return {std::log(b[node][0]) + s, std::log(b[node][1]) + s};
}

namespace internal {

ScalarEmission::ScalarEmission(const ScalarHmtParams& p) {
  constexpr double log_two_pi = 1.8378770664093453;
  half_inv_.resize(p.levels);
  log_norm_.resize(p.levels);
  for (int j = 0; j < p.levels; ++j) {
    half_inv_[j] = {0.5 / p.sigma2_S[j], 0.5 / p.sigma2_L[j]};
    log_norm_[j] = {-0.5 * (log_two_pi + std::log(p.sigma2_S[j])),
                    -0.5 * (log_two_pi + std::log(p.sigma2_L[j]))};
  }
}

VectorEmission::VectorEmission(const VectorHmtParams& p) {
  constexpr double log_two_pi = 1.8378770664093453;
  inv_.resize(p.levels);
  log_norm_.resize(p.levels);
  for (int j = 0; j < p.levels; ++j) {
    inv_[j] = {p.cov_S[j].inverse(), p.cov_L[j].inverse()};
    log_norm_[j] = {
        -0.5 * (3.0 * log_two_pi + std::log(p.cov_S[j].det())),
        -0.5 * (3.0 * log_two_pi + std::log(p.cov_L[j].det()))};
  }
}

}  // namespace internal

namespace {

template <typename ForestT, typename EmissionT, typename ParamsT>
BetaTree sweep(const ForestT& forest, const EmissionT& emission,
               const ParamsT& params) {
  if (forest.levels > params.levels) {
    throw Error("upward_sweep: forest deeper than parameter set");
  }
  size_t n = forest.nodes.size();
  BetaTree bt;
  bt.b.resize(n);
  bt.log_scale.resize(n);

  // Parents precede children in storage, so a reverse pass is bottom-up.
  for (size_t idx = n; idx-- > 0;) {
    const auto& node = forest.nodes[idx];
    std::array<double, 2> logb = emission.log_density(node.level, node.value);
    for (int k = 0; k < node.n_children; ++k) {
      int c = node.children[k];
      const Transition& a = params.transition[forest.nodes[c].level - 1];
      const std::array<double, 2>& cb = bt.b[c];
      double mS = a[0] * cb[0] + a[1] * cb[1];
      double mL = a[2] * cb[0] + a[3] * cb[1];
      logb[0] += std::log(std::max(mS, DBL_MIN)) + bt.log_scale[c];
      logb[1] += std::log(std::max(mL, DBL_MIN)) + bt.log_scale[c];
    }
    double s = std::max(logb[0], logb[1]);
    bt.b[idx] = {std::exp(logb[0] - s), std::exp(logb[1] - s)};
    bt.log_scale[idx] = s;
  }
  return bt;
}

template <typename ParamsT>
LevelPriors priors_impl(const ParamsT& params) {
  LevelPriors lp;
  lp.p.resize(params.levels);
  lp.p[params.levels - 1] = params.root;
  for (int j = params.levels - 1; j >= 1; --j) {
    const Transition& a = params.transition[j - 1];
    const std::array<double, 2>& parent = lp.p[j];
    lp.p[j - 1] = {parent[0] * a[0] + parent[1] * a[2],
                   parent[0] * a[1] + parent[1] * a[3]};
  }
  return lp;
}

}  // namespace

BetaTree upward_sweep(const ScalarForest& forest,
                      const ScalarHmtParams& params) {
  params.validate();
  return sweep(forest, internal::ScalarEmission(params), params);
}

BetaTree upward_sweep(const VectorForest& forest,
                      const VectorHmtParams& params) {
  params.validate();
  return sweep(forest, internal::VectorEmission(params), params);
}

LevelPriors level_priors(const ScalarHmtParams& params) {
  params.validate();
  return priors_impl(params);
}

LevelPriors level_priors(const VectorHmtParams& params) {
  params.validate();
  return priors_impl(params);
}

double subtree_loglik(const BetaTree& bt, int node, int level,
                      const LevelPriors& priors) {
  const std::array<double, 2>& p = priors.p[level - 1];
  double mix = bt.b[node][0] * p[0] + bt.b[node][1] * p[1];
  return std::log(mix) + bt.log_scale[node];
}

std::array<double, 2> block_loglik(std::span<const BetaTree* const> trees,
                                   int node) {
  std::array<double, 2> out = {0.0, 0.0};
  for (const BetaTree* bt : trees) {
    std::array<double, 2> lb = bt->log_beta(node);
    out[0] += lb[0];
    out[1] += lb[1];
  }
  return out;
}

int ml_label(const std::array<double, 2>& loglik) {
  return loglik[1] > loglik[0] ? 1 : 0;
}

}  // namespace mdis

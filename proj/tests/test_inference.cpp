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

#include <cmath>
#include <random>

#include "doctest.h"
#include "mdis/inference.hpp"
#include "support/testutil.hpp"

using namespace mdis;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

TEST_CASE("upward sweep equals brute-force enumeration on a depth-1 quad") {
  ScalarForest f;
  int root = f.add_node(2, -1, 0.4);
  f.add_node(1, root, -1.3);
  f.add_node(1, root, 0.2);
  f.add_node(1, root, 2.5);
  f.add_node(1, root, -0.1);

  ScalarHmtParams p;
  p.levels = 2;
  p.sigma2_S = {0.2, 0.3};
  p.sigma2_L = {3.0, 5.0};
  p.transition = {Transition{0.85, 0.15, 0.25, 0.75}, Transition{0.5, 0.5, 0.5, 0.5}};
  p.root = {0.6, 0.4};

  BetaTree bt = upward_sweep(f, p);
  auto want = test::enumerate_beta(f, p, root);
  auto got = bt.log_beta(root);
  CHECK(rel_err(std::exp(got[0]), want[0]) < 1e-10);
  CHECK(rel_err(std::exp(got[1]), want[1]) < 1e-10);

  LevelPriors pri = level_priors(p);
  double whole = subtree_loglik(bt, root, 2, pri);
  double want_whole = want[0] * p.root[0] + want[1] * p.root[1];
  CHECK(rel_err(std::exp(whole), want_whole) < 1e-10);
}

TEST_CASE("equal emission variances make both beta components equal") {
  std::mt19937 rng(31);
  ScalarForest f = test::random_tree(rng, 17, 3);
  ScalarHmtParams p = test::random_params(rng, 3);
  for (int j = 0; j < 3; ++j) p.sigma2_L[j] = p.sigma2_S[j];
  BetaTree bt = upward_sweep(f, p);
  for (size_t i = 0; i < f.nodes.size(); ++i) {
    CHECK(bt.b[i][0] == doctest::Approx(bt.b[i][1]).epsilon(1e-12));
  }
}

TEST_CASE("sweep matches enumeration on random irregular trees") {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> budget(1, 19);
  for (int trial = 0; trial < 40; ++trial) {
    int levels = 3;
    ScalarForest f = test::random_tree(rng, budget(rng), levels);
    ScalarHmtParams p = test::random_params(rng, levels);
    BetaTree bt = upward_sweep(f, p);
    LevelPriors pri = level_priors(p);
    for (int node : {0}) {
      auto want = test::enumerate_beta(f, p, node);
      auto got = bt.log_beta(node);
      CHECK(rel_err(std::exp(got[0]), want[0]) < 1e-9);
      CHECK(rel_err(std::exp(got[1]), want[1]) < 1e-9);
      double whole = std::exp(subtree_loglik(bt, node, f.nodes[node].level, pri));
      double want_whole = want[0] * pri.p[f.nodes[node].level - 1][0] +
                          want[1] * pri.p[f.nodes[node].level - 1][1];
      CHECK(rel_err(whole, want_whole) < 1e-9);
    }
  }
}

TEST_CASE("sweep matches enumeration on a 21-node two-child tree") {
  // Depth-3 style check at reduced branching: 21 nodes, 2 children each.
  std::mt19937 rng(99);
  std::normal_distribution<double> coeff(0.0, 1.0);
  ScalarForest f;
  int levels = 5;
  f.add_node(levels, -1, coeff(rng));
  std::vector<int> frontier = {0};
  while (static_cast<int>(f.nodes.size()) < 21) {
    int id = frontier.front();
    frontier.erase(frontier.begin());
    for (int k = 0; k < 2 && static_cast<int>(f.nodes.size()) < 21; ++k) {
      frontier.push_back(f.add_node(f.nodes[id].level - 1, id, coeff(rng)));
    }
  }
  ScalarHmtParams p = test::random_params(rng, levels);
  BetaTree bt = upward_sweep(f, p);
  auto want = test::enumerate_beta(f, p, 0);
  auto got = bt.log_beta(0);
  CHECK(rel_err(std::exp(got[0]), want[0]) < 1e-9);
  CHECK(rel_err(std::exp(got[1]), want[1]) < 1e-9);
}

TEST_CASE("subtree likelihood is local to the subtree") {
  std::mt19937 rng(7);
  ScalarForest f;
  int root = f.add_node(3, -1, 0.3);
  int left = f.add_node(2, root, -0.6);
  int right = f.add_node(2, root, 1.1);
  f.add_node(1, left, 0.9);
  f.add_node(1, left, -0.2);
  int rl = f.add_node(1, right, 0.5);
  ScalarHmtParams p = test::random_params(rng, 3);
  LevelPriors pri = level_priors(p);

  double before = subtree_loglik(upward_sweep(f, p), left, 2, pri);
  f.nodes[rl].value = -3.0;  // outside the left subtree
  f.nodes[root].value = 2.0;
  double after = subtree_loglik(upward_sweep(f, p), left, 2, pri);
  CHECK(before == after);
}

TEST_CASE("level_priors propagation") {
  ScalarHmtParams p;
  p.levels = 3;
  p.sigma2_S = {0.1, 0.1, 0.1};
  p.sigma2_L = {1.0, 1.0, 1.0};
  p.root = {0.3, 0.7};

  SUBCASE("identity transitions copy the root pmf everywhere") {
    p.transition.assign(3, Transition{1.0, 0.0, 0.0, 1.0});
    LevelPriors pri = level_priors(p);
    for (int j = 0; j < 3; ++j) {
      CHECK(pri.p[j][0] == doctest::Approx(0.3).epsilon(1e-15));
      CHECK(pri.p[j][1] == doctest::Approx(0.7).epsilon(1e-15));
    }
  }

  SUBCASE("uniform root is stationary under symmetric transitions") {
    p.root = {0.5, 0.5};
    p.transition.assign(3, Transition{0.8, 0.2, 0.2, 0.8});
    LevelPriors pri = level_priors(p);
    for (int j = 0; j < 3; ++j) {
      CHECK(pri.p[j][0] == doctest::Approx(0.5).epsilon(1e-15));
    }
  }

  SUBCASE("universal priors stay normalized") {
    LevelPriors pri = level_priors(universal_params(5));
    for (const auto& pmf : pri.p) {
      CHECK(pmf[0] + pmf[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("single-leaf subtree under a degenerate prior is the emission") {
  ScalarForest f;
  f.add_node(1, -1, 0.8);
  ScalarHmtParams p;
  p.levels = 1;
  p.sigma2_S = {0.4};
  p.sigma2_L = {2.0};
  p.transition = {Transition{0.5, 0.5, 0.5, 0.5}};
  p.root = {1.0, 0.0};
  BetaTree bt = upward_sweep(f, p);
  LevelPriors pri = level_priors(p);
  CHECK(subtree_loglik(bt, 0, 1, pri) ==
        doctest::Approx(log_gauss_pdf(0.8, 0.4)).epsilon(1e-12));
}

TEST_CASE("block log-likelihood multiplies band trees") {
  BetaTree a, b, c;
  for (BetaTree* t : {&a, &b, &c}) {
    t->b = {{1.0, 0.2}};
    t->log_scale = {std::log(0.1)};  // beta = (0.1, 0.02)
  }
  const BetaTree* bands[3] = {&a, &b, &c};
  auto ll = block_loglik(bands, 0);
  CHECK(ll[0] == doctest::Approx(3.0 * std::log(0.1)).epsilon(1e-12));
  CHECK(ll[1] == doctest::Approx(3.0 * std::log(0.02)).epsilon(1e-12));

  // Vector mode: a single tree is its own block likelihood.
  const BetaTree* vec[1] = {&a};
  auto lv = block_loglik(vec, 0);
  CHECK(lv[0] == doctest::Approx(std::log(0.1)).epsilon(1e-12));

  // Summation order across bands cannot matter.
  const BetaTree* perm[3] = {&c, &a, &b};
  auto lp = block_loglik(perm, 0);
  CHECK(lp[0] == doctest::Approx(ll[0]).epsilon(1e-15));
  CHECK(lp[1] == doctest::Approx(ll[1]).epsilon(1e-15));
}

TEST_CASE("block likelihood agrees with subtree likelihood") {
  std::mt19937 rng(55);
  ScalarForest f = test::random_tree(rng, 13, 3);
  ScalarHmtParams p = test::random_params(rng, 3);
  BetaTree bt = upward_sweep(f, p);
  LevelPriors pri = level_priors(p);

  // Single tree: sum_c prior(c) exp(block(c)) equals the subtree likelihood.
  const BetaTree* one[1] = {&bt};
  auto bl = block_loglik(one, 0);
  int lvl = f.nodes[0].level;
  double mixed = pri.p[lvl - 1][0] * std::exp(bl[0]) +
                 pri.p[lvl - 1][1] * std::exp(bl[1]);
  CHECK(std::log(mixed) ==
        doctest::Approx(subtree_loglik(bt, 0, lvl, pri)).epsilon(1e-10));

  // Three bands under a degenerate prior: the product of subtree
  // likelihoods equals the summed block likelihood.
  ScalarForest f2 = test::random_tree(rng, 9, 3);
  ScalarForest f3 = test::random_tree(rng, 11, 3);
  BetaTree bt2 = upward_sweep(f2, p);
  BetaTree bt3 = upward_sweep(f3, p);
  ScalarHmtParams sharp = p;
  sharp.root = {1.0, 0.0};
  LevelPriors spri = level_priors(sharp);
  // With identity transitions the prior stays degenerate at every level.
  ScalarHmtParams ident = sharp;
  ident.transition.assign(3, Transition{1.0, 0.0, 0.0, 1.0});
  LevelPriors dpri = level_priors(ident);
  const BetaTree* bands[3] = {&bt, &bt2, &bt3};
  auto bl3 = block_loglik(bands, 0);
  double lhs = dpri.p[lvl - 1][0] * std::exp(bl3[0]) +
               dpri.p[lvl - 1][1] * std::exp(bl3[1]);
  double rhs = std::exp(subtree_loglik(bt, 0, lvl, dpri)) *
               std::exp(subtree_loglik(bt2, 0, lvl, dpri)) *
               std::exp(subtree_loglik(bt3, 0, lvl, dpri));
  CHECK(std::log(lhs) == doctest::Approx(std::log(rhs)).epsilon(1e-10));
}

TEST_CASE("ml_label argmax with surround ties") {
  CHECK(ml_label({-3.0, -2.0}) == 1);
  CHECK(ml_label({-2.0, -3.0}) == 0);
  CHECK(ml_label({-2.5, -2.5}) == 0);
  // Invariance under common rescaling of likelihoods (shift in log domain).
  CHECK(ml_label({-3.0 + 17.0, -2.0 + 17.0}) == 1);
}

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

#ifndef MDIS_TESTS_TESTUTIL_HPP
#define MDIS_TESTS_TESTUTIL_HPP

#include <cmath>
#include <random>
#include <vector>

#include "mdis/forest.hpp"
#include "mdis/hmt.hpp"
#include "mdis/image.hpp"
#include "mdis/matrix.hpp"

namespace mdis::test {

// All tests use seeded mt19937 generators so runs are reproducible.

inline Matrix random_matrix(int rows, int cols, std::mt19937& rng,
                            double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = dist(rng);
  }
  return m;
}

inline LuminanceImage random_luminance(int side, std::mt19937& rng) {
  return LuminanceImage{random_matrix(side, side, rng)};
}

inline RawImage matrix_to_gray_image(const Matrix& m) {
  RawImage img;
  img.width = m.cols();
  img.height = m.rows();
  img.rgb.resize(static_cast<size_t>(img.width) * img.height * 3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double v = std::clamp(m(y, x), 0.0, 1.0);
      auto q = static_cast<std::uint8_t>(std::lround(v * 255.0));
      size_t at = (static_cast<size_t>(y) * img.width + x) * 3;
      img.rgb[at] = img.rgb[at + 1] = img.rgb[at + 2] = q;
    }
  }
  return img;
}

// --- Independent brute-force oracle for the upward sweep -------------------
//
// beta_root(m) = f(subtree | root state = m) summed over every full hidden
// state assignment, evaluated term by term. No message passing, no reuse of
// the recursion under test: the recursion below only walks the assignment
// space, carrying the running product of explicit transition and emission
// factors.

inline double enum_term(const ScalarForest& f, const ScalarHmtParams& p,
                        const std::vector<int>& order, size_t pos,
                        std::vector<int>& states, double partial) {
  if (pos == order.size()) return partial;
  int id = order[pos];
  const auto& node = f.nodes[id];
  double total = 0.0;
  for (int m = 0; m < 2; ++m) {
    states[id] = m;
    double factor =
        gauss_pdf(node.value,
                  m == kStateS ? p.sigma2_S[node.level - 1] : p.sigma2_L[node.level - 1]);
    if (node.parent >= 0) {
      int mp = states[node.parent];
      factor *= p.transition[node.level - 1][2 * mp + m];
    }
    total += enum_term(f, p, order, pos + 1, states, partial * factor);
  }
  return total;
}

// Conditional subtree likelihood of the subtree rooted at `root`, given the
// root state. Parents must appear before children in `order`.
inline std::array<double, 2> enumerate_beta(const ScalarForest& f,
                                            const ScalarHmtParams& p,
                                            int root) {
  // Collect the subtree in parent-before-child order.
  std::vector<int> order;
  std::vector<int> stack = {root};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    order.push_back(id);
    const auto& node = f.nodes[id];
    for (int k = 0; k < node.n_children; ++k) stack.push_back(node.children[k]);
  }

  std::vector<int> states(f.nodes.size(), -1);
  std::array<double, 2> beta;
  for (int m = 0; m < 2; ++m) {
    states[root] = m;
    const auto& node = f.nodes[root];
    double emission =
        gauss_pdf(node.value,
                  m == kStateS ? p.sigma2_S[node.level - 1] : p.sigma2_L[node.level - 1]);
    // Children of the root onwards are enumerated; the root's own transition
    // factor is excluded because beta conditions on its state.
    beta[m] = enum_term(f, p, order, 1, states, emission);
  }
  return beta;
}

// Random forest and parameters for oracle tests. Shapes are irregular:
// every non-leaf node gets 1..4 children until the node budget is spent.
inline ScalarForest random_tree(std::mt19937& rng, int max_nodes, int levels) {
  ScalarForest f;
  std::normal_distribution<double> coeff(0.0, 1.0);
  std::uniform_int_distribution<int> n_children(1, 4);
  f.add_node(levels, -1, coeff(rng));
  // Frontier expansion, breadth-first, until the budget runs out.
  std::vector<int> frontier = {0};
  while (!frontier.empty() && static_cast<int>(f.nodes.size()) < max_nodes) {
    int id = frontier.front();
    frontier.erase(frontier.begin());
    int level = f.nodes[id].level;
    if (level <= 1) continue;
    int want = n_children(rng);
    for (int k = 0; k < want && static_cast<int>(f.nodes.size()) < max_nodes; ++k) {
      frontier.push_back(f.add_node(level - 1, id, coeff(rng)));
    }
  }
  return f;
}

inline ScalarHmtParams random_params(std::mt19937& rng, int levels) {
  std::uniform_real_distribution<double> var(0.05, 4.0);
  std::uniform_real_distribution<double> persist(0.55, 0.95);
  std::uniform_real_distribution<double> rootp(0.1, 0.9);
  ScalarHmtParams p;
  p.levels = levels;
  p.sigma2_S.resize(levels);
  p.sigma2_L.resize(levels);
  p.transition.resize(levels);
  for (int j = 0; j < levels; ++j) {
    double a = var(rng);
    double b = var(rng);
    p.sigma2_S[j] = std::min(a, b);
    p.sigma2_L[j] = std::max(a, b) + 0.01;
    double ss = persist(rng);
    double ll = persist(rng);
    p.transition[j] = {ss, 1.0 - ss, 1.0 - ll, ll};
  }
  double r = rootp(rng);
  p.root = {r, 1.0 - r};
  p.validate();
  return p;
}

// Samples a forest from a known scalar HMT: quad trees of the given depth,
// states following the parent->child chain, coefficients from the state's
// Gaussian. Used as the generative oracle for EM recovery tests.
inline ScalarForest sample_hmt_forest(const ScalarHmtParams& p, int depth,
                                      int n_trees, std::mt19937& rng) {
  ScalarForest f;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<int> states;
  for (int t = 0; t < n_trees; ++t) {
    states.assign(1, u(rng) < p.root[kStateS] ? kStateS : kStateL);
    double sd = std::sqrt(states[0] == kStateS ? p.sigma2_S[depth - 1]
                                               : p.sigma2_L[depth - 1]);
    int root = f.add_node(depth, -1, sd * gauss(rng));
    std::vector<std::pair<int, int>> frontier = {{root, states[0]}};
    while (!frontier.empty()) {
      auto [id, state] = frontier.back();
      frontier.pop_back();
      int level = f.nodes[id].level;
      if (level <= 1) continue;
      for (int k = 0; k < 4; ++k) {
        const Transition& a = p.transition[level - 2];
        int child_state = u(rng) < a[2 * state] ? kStateS : kStateL;
        double csd = std::sqrt(child_state == kStateS ? p.sigma2_S[level - 2]
                                                      : p.sigma2_L[level - 2]);
        int cid = f.add_node(level - 1, id, csd * gauss(rng));
        frontier.emplace_back(cid, child_state);
      }
    }
  }
  return f;
}

// Vector variant with per-state covariance matrices shared across levels.
inline VectorForest sample_vhmt_forest(const VectorHmtParams& p, int depth,
                                       int n_trees, std::mt19937& rng) {
  VectorForest f;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto sample_vec = [&](const Cov3& c) {
    // Cholesky factor, lower triangular.
    double l00 = std::sqrt(c.at(0, 0));
    double l10 = c.at(1, 0) / l00;
    double l20 = c.at(2, 0) / l00;
    double l11 = std::sqrt(c.at(1, 1) - l10 * l10);
    double l21 = (c.at(2, 1) - l20 * l10) / l11;
    double l22 = std::sqrt(c.at(2, 2) - l20 * l20 - l21 * l21);
    double z0 = gauss(rng), z1 = gauss(rng), z2 = gauss(rng);
    return Vec3{l00 * z0, l10 * z0 + l11 * z1, l20 * z0 + l21 * z1 + l22 * z2};
  };

  for (int t = 0; t < n_trees; ++t) {
    int state = u(rng) < p.root[kStateS] ? kStateS : kStateL;
    int root = f.add_node(
        depth, -1, sample_vec(state == kStateS ? p.cov_S[depth - 1] : p.cov_L[depth - 1]));
    std::vector<std::pair<int, int>> frontier = {{root, state}};
    while (!frontier.empty()) {
      auto [id, st] = frontier.back();
      frontier.pop_back();
      int level = f.nodes[id].level;
      if (level <= 1) continue;
      for (int k = 0; k < 4; ++k) {
        const Transition& a = p.transition[level - 2];
        int cs = u(rng) < a[2 * st] ? kStateS : kStateL;
        int cid = f.add_node(
            level - 1, id, sample_vec(cs == kStateS ? p.cov_S[level - 2] : p.cov_L[level - 2]));
        frontier.emplace_back(cid, cs);
      }
    }
  }
  return f;
}

}  // namespace mdis::test

#endif  // MDIS_TESTS_TESTUTIL_HPP

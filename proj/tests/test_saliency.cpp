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
#include <cstring>
#include <random>

#include "doctest.h"
#include "mdis/saliency.hpp"
#include "support/testutil.hpp"

using namespace mdis;

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Smooth gradient background with an optional high-variance square patch.
Matrix patch_scene(int side, int patch_side, int px, int py, std::mt19937& rng,
                   bool with_patch = true) {
  Matrix m(side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      m(y, x) = 0.45 + 0.25 * std::sin(2.0 * M_PI * x / side) *
                           std::sin(2.0 * M_PI * y / side);
    }
  }
  if (with_patch) {
    std::uniform_real_distribution<double> noise(-0.35, 0.35);
    for (int y = py; y < py + patch_side; ++y) {
      for (int x = px; x < px + patch_side; ++x) {
        m(y, x) = std::clamp(0.5 + noise(rng), 0.0, 1.0);
      }
    }
  }
  return m;
}

}  // namespace

TEST_CASE("block_mi at the landmark posteriors") {
  CHECK(block_mi(0.5, kLn2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(block_mi(1.0, kLn2) == doctest::Approx(kLn2).epsilon(1e-15));
  CHECK(block_mi(0.0, kLn2) == doctest::Approx(kLn2).epsilon(1e-15));
  // Independent evaluation of -(0.9 ln 0.9 + 0.1 ln 0.1).
  double h_post = -(0.9 * std::log(0.9) + 0.1 * std::log(0.1));
  CHECK(h_post == doctest::Approx(0.3250829733914482).epsilon(1e-12));
  CHECK(block_mi(0.9, kLn2) == doctest::Approx(kLn2 - h_post).epsilon(1e-12));
  CHECK(block_mi(0.9, kLn2) == doctest::Approx(0.3680642071684971).epsilon(1e-9));
  // Posterior entropy above the class entropy clamps at zero.
  CHECK(block_mi(0.5, 0.1) == 0.0);
}

TEST_CASE("class_entropy of label grids") {
  LabelGrid all(4, 4, 1);
  CHECK(class_entropy(all) == 0.0);
  LabelGrid half(4, 4, 0);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 2; ++c) half(r, c) = 1;
  }
  CHECK(class_entropy(half) == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(class_entropy(half) <= kLn2 + 1e-12);
}

TEST_CASE("saliency_at_scale paints blocks and preserves the mean") {
  Matrix grid(1, 1, 0.42);
  Matrix painted = saliency_at_scale(grid, 5);
  CHECK(painted.rows() == 32);
  CHECK(painted.cols() == 32);
  for (int r = 0; r < 32; ++r) {
    for (int c = 0; c < 32; ++c) CHECK(painted(r, c) == 0.42);
  }

  Matrix checker(2, 2);
  checker(0, 0) = checker(1, 1) = 1.0;
  Matrix board = saliency_at_scale(checker, 2);
  CHECK(board(0, 0) == 1.0);
  CHECK(board(0, 4) == 0.0);
  CHECK(board(4, 0) == 0.0);
  CHECK(board(7, 7) == 1.0);

  std::mt19937 rng(3);
  Matrix rnd = test::random_matrix(8, 8, rng);
  Matrix wide = saliency_at_scale(rnd, 3);
  double mg = 0.0, mw = 0.0;
  for (size_t i = 0; i < rnd.size(); ++i) mg += rnd.data()[i];
  for (size_t i = 0; i < wide.size(); ++i) mw += wide.data()[i];
  CHECK(mg / rnd.size() == doctest::Approx(mw / wide.size()).epsilon(1e-12));
}

TEST_CASE("fuse_max dominates its inputs and ignores order") {
  std::mt19937 rng(5);
  std::vector<Matrix> maps;
  maps.push_back(test::random_matrix(16, 16, rng));
  maps.push_back(test::random_matrix(16, 16, rng));
  maps.push_back(Matrix(16, 16, 0.0));

  Matrix fused = fuse_max(maps);
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      for (const Matrix& m : maps) CHECK(fused(r, c) >= m(r, c));
    }
  }

  // All-zero map drops out of the fusion.
  std::vector<Matrix> pair = {maps[0], maps[2]};
  Matrix fused2 = fuse_max(pair);
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) CHECK(fused2(r, c) == maps[0](r, c));
  }

  std::vector<Matrix> perm = {maps[2], maps[1], maps[0]};
  Matrix fused3 = fuse_max(perm);
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) CHECK(fused3(r, c) == fused(r, c));
  }

  std::vector<Matrix> bad = {maps[0], Matrix(8, 8, 0.0)};
  CHECK_THROWS(fuse_max(bad));
}

TEST_CASE("normalize01 rescales affinely and handles constants") {
  Matrix m(1, 2);
  m(0, 0) = 0.0;
  m(0, 1) = kLn2;
  Matrix n = normalize01(m);
  CHECK(n(0, 0) == 0.0);
  CHECK(n(0, 1) == 1.0);

  Matrix flat(3, 3, 0.123);
  Matrix nf = normalize01(flat);
  for (size_t i = 0; i < nf.size(); ++i) CHECK(nf.data()[i] == 0.5);

  std::mt19937 rng(6);
  Matrix r = test::random_matrix(6, 6, rng, -4.0, 9.0);
  Matrix nr = normalize01(r);
  for (int i = 0; i < 35; ++i) {
    // Ordering is preserved pairwise.
    double a = r.data()[i] - r.data()[i + 1];
    double b = nr.data()[i] - nr.data()[i + 1];
    CHECK(a * b >= 0.0);
  }
}

TEST_CASE("mode names parse and print both ways") {
  auto cfg = parse_mode("uhmt0");
  REQUIRE(cfg.has_value());
  CHECK(cfg->model == ModeConfig::Model::Universal);
  CHECK(cfg->scale == 0);
  CHECK(mode_name(*cfg) == "uhmt0");

  CHECK(parse_mode("thmt6")->model == ModeConfig::Model::Trained);
  CHECK(parse_mode("vhmt3")->scale == 3);
  CHECK(!parse_mode("xhmt1").has_value());
  CHECK(!parse_mode("uhmt7").has_value());
  CHECK(!parse_mode("uhmt").has_value());
  CHECK(!parse_mode("").has_value());
}

TEST_CASE("pseudo-dis posterior follows the coefficient magnitude") {
  // Two-level pyramid on a tiny image with hand-set coefficients.
  LuminanceImage img{Matrix(8, 8, 0.0)};
  WaveletPyramid pyr = dwt2_haar(img, 2);
  pyr.band(Band::LH, 1)(0, 0) = 0.0;    // dead centre of the small state
  pyr.band(Band::LH, 1)(0, 1) = 40.0;   // far tail, large state
  ScalarBandModel model;
  ScalarHmtParams p;
  p.levels = 2;
  p.sigma2_S = {0.01, 0.01};
  p.sigma2_L = {100.0, 100.0};
  p.transition.assign(2, Transition{0.5, 0.5, 0.5, 0.5});
  p.root = {0.5, 0.5};
  model.band.fill(p);

  SaliencyOptions opts;
  opts.coeff_scale = 1.0;  // coefficients are already in model units
  PseudoDisResult res = pseudo_dis(pyr, model, opts);
  CHECK(res.labels(0, 0) == 0);
  CHECK(res.labels(0, 1) == 1);
  CHECK(res.mi_grid.rows() == 4);
}

TEST_CASE("pseudo-dis agrees with a depth-1 cascade under a uniform prior") {
  std::mt19937 rng(11);
  RawImage img = test::matrix_to_gray_image(test::random_matrix(64, 64, rng));
  SaliencyOptions opts;
  opts.depth = 1;
  ModeConfig fine{ModeConfig::Model::Universal, 5};
  ModeConfig dis{ModeConfig::Model::Universal, 6};
  auto a = compute_saliency_detailed(img, fine, opts);
  auto b = compute_saliency_detailed(img, dis, opts);
  REQUIRE(b.pseudo.has_value());
  const Matrix& mi_cascade = a.stages.mi[0];
  const Matrix& mi_pseudo = b.pseudo->mi_grid;
  REQUIRE(mi_cascade.same_shape(mi_pseudo));
  for (int r = 0; r < mi_cascade.rows(); ++r) {
    for (int c = 0; c < mi_cascade.cols(); ++c) {
      CHECK(mi_cascade(r, c) == doctest::Approx(mi_pseudo(r, c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("constant input yields the degenerate half-gray map") {
  RawImage img = test::matrix_to_gray_image(Matrix(96, 128, 0.5));
  SaliencyMap map = compute_saliency(img, ModeConfig{ModeConfig::Model::Universal, 0});
  CHECK(map.values.rows() == 96);
  CHECK(map.values.cols() == 128);
  for (size_t i = 0; i < map.values.size(); ++i) {
    CHECK(map.values.data()[i] == 0.5);
  }
}

TEST_CASE("compute_saliency is deterministic bit for bit") {
  std::mt19937 rng(23);
  RawImage img = test::matrix_to_gray_image(patch_scene(128, 16, 56, 56, rng));
  for (const char* name : {"uhmt0", "thmt2", "vhmt0", "uhmt6"}) {
    ModeConfig cfg = *parse_mode(name);
    SaliencyMap m1 = compute_saliency(img, cfg);
    SaliencyMap m2 = compute_saliency(img, cfg);
    REQUIRE(m1.values.size() == m2.values.size());
    CHECK(std::memcmp(m1.values.data(), m2.values.data(),
                      m1.values.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("MI grids respect 0 <= I <= H <= ln2 at every scale") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    RawImage img = test::matrix_to_gray_image(
        patch_scene(128, 32, 16 + 24 * trial, 48, rng));
    for (auto kind : {ModeConfig::Model::Universal, ModeConfig::Model::Trained,
                      ModeConfig::Model::Vector}) {
      auto res = compute_saliency_detailed(img, ModeConfig{kind, 0});
      for (size_t j = 0; j < res.stages.mi.size(); ++j) {
        double h = res.stages.entropy[j];
        CHECK(h <= kLn2 + 1e-9);
        const Matrix& mi = res.stages.mi[j];
        for (size_t i = 0; i < mi.size(); ++i) {
          CHECK(mi.data()[i] >= 0.0);
          CHECK(mi.data()[i] <= h + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("fused map dominates the painted single-scale maps") {
  std::mt19937 rng(41);
  RawImage img = test::matrix_to_gray_image(patch_scene(128, 32, 64, 32, rng));
  auto res = compute_saliency_detailed(
      img, ModeConfig{ModeConfig::Model::Universal, 0});
  std::vector<Matrix> painted;
  for (int j = 1; j <= 5; ++j) {
    painted.push_back(saliency_at_scale(res.stages.mi[j - 1], j));
  }
  Matrix fused = fuse_max(painted);
  for (const Matrix& m : painted) {
    for (size_t i = 0; i < fused.size(); ++i) {
      CHECK(fused.data()[i] >= m.data()[i]);
    }
  }
}

TEST_CASE("a high-variance patch on a smooth background lights up") {
  std::mt19937 rng(1208);
  int hits = 0;
  for (int seed = 0; seed < 3; ++seed) {
    Matrix scene = patch_scene(256, 32, 112, 112, rng);
    RawImage img = test::matrix_to_gray_image(scene);
    SaliencyMap map =
        compute_saliency(img, ModeConfig{ModeConfig::Model::Universal, 0});
    double inside = 0.0, outside = 0.0;
    int n_in = 0, n_out = 0;
    for (int y = 0; y < 256; ++y) {
      for (int x = 0; x < 256; ++x) {
        bool in = y >= 112 && y < 144 && x >= 112 && x < 144;
        (in ? inside : outside) += map.values(y, x);
        (in ? n_in : n_out) += 1;
      }
    }
    inside /= n_in;
    outside /= n_out;
    if (inside > 2.0 * outside) ++hits;
  }
  CHECK(hits >= 2);
}

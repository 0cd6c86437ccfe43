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

#include "mdis/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <thread>

#include "mdis/em.hpp"
#include "mdis/errors.hpp"

namespace mdis {

namespace {

double posterior_from_logs(double score0, double score1) {
  double m = std::max(score0, score1);
  double e0 = std::exp(score0 - m);
  double e1 = std::exp(score1 - m);
  return e1 / (e0 + e1);
}

std::array<double, 2> combine_band_priors(
    const std::array<LevelPriors, 3>& pri, int level) {
  // Independent band labels conditioned on agreement: product, renormalized.
  double q0 = 1.0, q1 = 1.0;
  for (const auto& p : pri) {
    q0 *= p.p[level - 1][0];
    q1 *= p.p[level - 1][1];
  }
  double z = q0 + q1;
  return {q0 / z, q1 / z};
}

int selector_level(const ModeConfig& cfg, int depth) {
  // Selector 1 = 32x32 blocks = level 5, ..., selector 5 = 2x2 = level 1.
  int level = 6 - cfg.scale;
  if (level > depth) {
    throw Error("mode " + mode_name(cfg) + " needs transform depth >= " +
                std::to_string(level));
  }
  return level;
}

}  // namespace

std::optional<ModeConfig> parse_mode(const std::string& name) {
  if (name.size() != 5 || name.compare(1, 3, "hmt") != 0) return std::nullopt;
  ModeConfig cfg;
  switch (name[0]) {
    case 'u': cfg.model = ModeConfig::Model::Universal; break;
    case 't': cfg.model = ModeConfig::Model::Trained; break;
    case 'v': cfg.model = ModeConfig::Model::Vector; break;
    default: return std::nullopt;
  }
  if (name[4] < '0' || name[4] > '6') return std::nullopt;
  cfg.scale = name[4] - '0';
  return cfg;
}

std::string mode_name(const ModeConfig& cfg) {
  char m = cfg.model == ModeConfig::Model::Universal   ? 'u'
           : cfg.model == ModeConfig::Model::Trained ? 't'
                                                       : 'v';
  return std::string(1, m) + "hmt" + std::to_string(cfg.scale);
}

double class_entropy(const LabelGrid& labels) {
  size_t total = labels.size();
  if (total == 0) return 0.0;
  size_t ones = 0;
  for (int r = 0; r < labels.rows(); ++r) {
    for (int c = 0; c < labels.cols(); ++c) ones += labels(r, c);
  }
  double p = static_cast<double>(ones) / static_cast<double>(total);
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

double block_mi(double posterior_centre, double class_entropy) {
  double p = posterior_centre;
  double h_post = 0.0;
  if (p > 0.0) h_post -= p * std::log(p);
  if (p < 1.0) h_post -= (1.0 - p) * std::log(1.0 - p);
  return std::max(0.0, class_entropy - h_post);
}

Matrix saliency_at_scale(const Matrix& grid, int level) {
  int block = 1 << level;
  Matrix out(grid.rows() * block, grid.cols() * block);
  for (int r = 0; r < grid.rows(); ++r) {
    for (int c = 0; c < grid.cols(); ++c) {
      double v = grid(r, c);
      for (int dr = 0; dr < block; ++dr) {
        for (int dc = 0; dc < block; ++dc) {
          out(r * block + dr, c * block + dc) = v;
        }
      }
    }
  }
  return out;
}

Matrix fuse_max(std::span<const Matrix> maps) {
  if (maps.empty()) throw Error("fuse_max: no maps");
  Matrix out = maps[0];
  for (size_t i = 1; i < maps.size(); ++i) {
    if (!maps[i].same_shape(out)) throw Error("fuse_max: dimension mismatch");
    for (int r = 0; r < out.rows(); ++r) {
      for (int c = 0; c < out.cols(); ++c) {
        out(r, c) = std::max(out(r, c), maps[i](r, c));
      }
    }
  }
  return out;
}

Matrix normalize01(const Matrix& map) {
  double lo = map(0, 0);
  double hi = map(0, 0);
  for (int r = 0; r < map.rows(); ++r) {
    for (int c = 0; c < map.cols(); ++c) {
      lo = std::min(lo, map(r, c));
      hi = std::max(hi, map(r, c));
    }
  }
  Matrix out(map.rows(), map.cols());
  if (!(hi - lo > 1e-15)) {
    for (int r = 0; r < out.rows(); ++r) {
      for (int c = 0; c < out.cols(); ++c) out(r, c) = 0.5;
    }
    return out;
  }
  double inv = 1.0 / (hi - lo);
  for (int r = 0; r < out.rows(); ++r) {
    for (int c = 0; c < out.cols(); ++c) out(r, c) = (map(r, c) - lo) * inv;
  }
  return out;
}

PipelineModel fit_model(const WaveletPyramid& pyr, ModeConfig::Model kind,
                        const SaliencyOptions& opts) {
  switch (kind) {
    case ModeConfig::Model::Universal: {
      ScalarBandModel m;
      m.band.fill(universal_params(pyr.depth()));
      return m;
    }
    case ModeConfig::Model::Trained: {
      ScalarBandModel m;
      EmOptions em{opts.em_max_iter, opts.em_tol};
      auto train_band = [&](int i) {
        ScalarForest forest =
            forest_from_band(pyr, kBands[i], opts.coeff_scale);
        m.band[i] = default_scalar_init(forest);
        em_train(forest, &m.band[i], em);
      };
      if (opts.parallel_bands) {
        std::thread t1(train_band, 0);
        std::thread t2(train_band, 1);
        train_band(2);
        t1.join();
        t2.join();
      } else {
        for (int i = 0; i < 3; ++i) train_band(i);
      }
      return m;
    }
    case ModeConfig::Model::Vector: {
      VectorForest forest = forest_from_pyramid(pyr, opts.coeff_scale);
      VectorHmtParams params = default_vector_init(forest);
      em_train(forest, &params, EmOptions{opts.em_max_iter, opts.em_tol});
      return params;
    }
  }
  throw Error("fit_model: bad model kind");
}

SaliencyStages run_stages(const WaveletPyramid& pyr,
                          const PipelineModel& model,
                          const SaliencyOptions& opts) {
  SaliencyStages st;
  int depth = pyr.depth();
  st.logliks.resize(depth);

  if (const auto* scalar = std::get_if<ScalarBandModel>(&model)) {
    std::array<LevelPriors, 3> band_priors;
    std::array<BetaTree, 3> bts;
    ScalarForest forest;  // all bands share one shape; keep the last
    for (int i = 0; i < 3; ++i) {
      forest = forest_from_band(pyr, kBands[i], opts.coeff_scale);
      bts[i] = upward_sweep(forest, scalar->band[i]);
      band_priors[i] = level_priors(scalar->band[i]);
    }
    st.priors.p.resize(depth);
    for (int j = 1; j <= depth; ++j) {
      st.priors.p[j - 1] = combine_band_priors(band_priors, j);
      int side = pyr.level_side(j);
      st.logliks[j - 1].surround = Matrix(side, side);
      st.logliks[j - 1].centre = Matrix(side, side);
      for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
          int node = forest.by_level[j - 1][static_cast<size_t>(r) * side + c];
          double l0 = 0.0, l1 = 0.0;
          for (int i = 0; i < 3; ++i) {
            auto lb = bts[i].log_beta(node);
            l0 += lb[0];
            l1 += lb[1];
          }
          st.logliks[j - 1].surround(r, c) = l0;
          st.logliks[j - 1].centre(r, c) = l1;
        }
      }
    }
  } else {
    const auto& vparams = std::get<VectorHmtParams>(model);
    VectorForest forest = forest_from_pyramid(pyr, opts.coeff_scale);
    BetaTree bt = upward_sweep(forest, vparams);
    st.priors = level_priors(vparams);
    st.priors.p.resize(depth);
    for (int j = 1; j <= depth; ++j) {
      int side = pyr.level_side(j);
      st.logliks[j - 1].surround = Matrix(side, side);
      st.logliks[j - 1].centre = Matrix(side, side);
      for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
          int node = forest.by_level[j - 1][static_cast<size_t>(r) * side + c];
          auto lb = bt.log_beta(node);
          st.logliks[j - 1].surround(r, c) = lb[0];
          st.logliks[j - 1].centre(r, c) = lb[1];
        }
      }
    }
  }

  st.cascade = map_cascade(st.logliks, st.priors);
  st.entropy.resize(depth);
  st.mi.resize(depth);
  for (int j = 1; j <= depth; ++j) {
    st.entropy[j - 1] = class_entropy(st.cascade.labels[j - 1]);
    const Matrix& post = st.cascade.posterior[j - 1];
    Matrix grid(post.rows(), post.cols());
    for (int r = 0; r < post.rows(); ++r) {
      for (int c = 0; c < post.cols(); ++c) {
        grid(r, c) = block_mi(post(r, c), st.entropy[j - 1]);
      }
    }
    st.mi[j - 1] = std::move(grid);
  }
  return st;
}

PseudoDisResult pseudo_dis(const WaveletPyramid& pyr,
                           const PipelineModel& model,
                           const SaliencyOptions& opts) {
  int side = pyr.level_side(1);
  Matrix post(side, side);

  if (const auto* scalar = std::get_if<ScalarBandModel>(&model)) {
    std::array<LevelPriors, 3> band_priors;
    for (int i = 0; i < 3; ++i) band_priors[i] = level_priors(scalar->band[i]);
    std::array<double, 2> prior = combine_band_priors(band_priors, 1);
    for (int r = 0; r < side; ++r) {
      for (int c = 0; c < side; ++c) {
        double l0 = 0.0, l1 = 0.0;
        for (int i = 0; i < 3; ++i) {
          double w = opts.coeff_scale * pyr.band(kBands[i], 1)(r, c);
          l0 += log_gauss_pdf(w, scalar->band[i].sigma2_S[0]);
          l1 += log_gauss_pdf(w, scalar->band[i].sigma2_L[0]);
        }
        post(r, c) = posterior_from_logs(l0 + std::log(prior[0]),
                                         l1 + std::log(prior[1]));
      }
    }
  } else {
    const auto& vparams = std::get<VectorHmtParams>(model);
    std::array<double, 2> prior = level_priors(vparams).p[0];
    for (int r = 0; r < side; ++r) {
      for (int c = 0; c < side; ++c) {
        Vec3 w = {opts.coeff_scale * pyr.band(Band::LH, 1)(r, c),
                  opts.coeff_scale * pyr.band(Band::HL, 1)(r, c),
                  opts.coeff_scale * pyr.band(Band::HH, 1)(r, c)};
        double l0 = log_mvn_pdf(w, vparams.cov_S[0]);
        double l1 = log_mvn_pdf(w, vparams.cov_L[0]);
        post(r, c) = posterior_from_logs(l0 + std::log(prior[0]),
                                         l1 + std::log(prior[1]));
      }
    }
  }

  PseudoDisResult out;
  out.labels = LabelGrid(side, side);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      out.labels(r, c) = post(r, c) > 0.5 ? 1 : 0;
    }
  }
  out.entropy = class_entropy(out.labels);
  out.mi_grid = Matrix(side, side);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      out.mi_grid(r, c) = block_mi(post(r, c), out.entropy);
    }
  }
  return out;
}

Matrix select_map(const SaliencyStages& stages, int selector, int depth) {
  if (selector == 0) {
    int top = std::min(depth, 5);
    std::vector<Matrix> painted;
    painted.reserve(top);
    for (int j = 1; j <= top; ++j) {
      painted.push_back(saliency_at_scale(stages.mi[j - 1], j));
    }
    return fuse_max(painted);
  }
  int level = selector_level(ModeConfig{ModeConfig::Model::Universal, selector},
                             depth);
  return saliency_at_scale(stages.mi[level - 1], level);
}

SaliencyResult compute_saliency_detailed(const RawImage& img,
                                         const ModeConfig& cfg,
                                         const SaliencyOptions& opts) {
  auto [lum, window] = pad_to_dyadic(to_luminance(img), opts.min_side);

  SaliencyResult res;
  res.window = window;
  res.pyramid = dwt2_haar(lum, opts.depth);
  PipelineModel model = fit_model(res.pyramid, cfg.model, opts);

  Matrix full;
  if (cfg.scale == 6) {
    res.pseudo = pseudo_dis(res.pyramid, model, opts);
    full = saliency_at_scale(res.pseudo->mi_grid, 1);
  } else {
    res.stages = run_stages(res.pyramid, model, opts);
    full = select_map(res.stages, cfg.scale, res.pyramid.depth());
  }

  res.map.values = crop_map(normalize01(full), window);
  res.map.mode = mode_name(cfg);
  return res;
}

SaliencyMap compute_saliency(const RawImage& img, const ModeConfig& cfg,
                             const SaliencyOptions& opts) {
  return compute_saliency_detailed(img, cfg, opts).map;
}

void dump_map_float(const std::string& path, const Matrix& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out.write("MDISMAP1", 8);
  auto put_u32le = [&out](std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff),
                 static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
  };
  put_u32le(static_cast<std::uint32_t>(map.cols()));
  put_u32le(static_cast<std::uint32_t>(map.rows()));
  std::vector<float> row(map.cols());
  for (int r = 0; r < map.rows(); ++r) {
    for (int c = 0; c < map.cols(); ++c) row[c] = static_cast<float>(map(r, c));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw Error("write failed: " + path);
}

}  // namespace mdis

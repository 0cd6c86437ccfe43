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

#include "mdis/labeltree.hpp"

#include <algorithm>
#include <cmath>

#include "mdis/errors.hpp"

namespace mdis {

namespace {

constexpr double kTableClamp = 1e-6;

// P(c=1) from two log scores, stable for any magnitudes.
double posterior_from_logs(double score0, double score1) {
  double m = std::max(score0, score1);
  double e0 = std::exp(score0 - m);
  double e1 = std::exp(score1 - m);
  return e1 / (e0 + e1);
}

std::array<double, 2> clamp_row(std::array<double, 2> row) {
  row[0] = std::clamp(row[0], kTableClamp, 1.0 - kTableClamp);
  row[1] = std::clamp(row[1], kTableClamp, 1.0 - kTableClamp);
  double z = row[0] + row[1];
  return {row[0] / z, row[1] / z};
}

}  // namespace

ContextState context_of(const LabelGrid& coarser, int r, int c) {
  int pr = r / 2;
  int pc = c / 2;
  int parent = coarser(pr, pc);
  int ones = 0;
  int count = 0;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      int nr = pr + dr;
      int nc = pc + dc;
      if (nr < 0 || nr >= coarser.rows() || nc < 0 || nc >= coarser.cols()) {
        continue;
      }
      ones += coarser(nr, nc);
      ++count;
    }
  }
  int majority = parent;  // tie or isolated block inherits the parent
  if (2 * ones > count) majority = 1;
  if (2 * ones < count) majority = 0;
  return ContextState{parent, majority};
}

void fuse_scale(const ScaleLoglik& loglik,
                const std::vector<ContextState>& ctx, const ContextModel& cm,
                LabelGrid* labels, Matrix* posterior) {
  int rows = loglik.surround.rows();
  int cols = loglik.surround.cols();
  if (!loglik.surround.same_shape(loglik.centre) ||
      ctx.size() != static_cast<size_t>(rows) * cols) {
    throw Error("fuse_scale: shape mismatch");
  }
  *labels = LabelGrid(rows, cols);
  *posterior = Matrix(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto& row = cm.p[ctx[static_cast<size_t>(r) * cols + c].index()];
      double p1 = posterior_from_logs(loglik.surround(r, c) + std::log(row[0]),
                                      loglik.centre(r, c) + std::log(row[1]));
      (*posterior)(r, c) = p1;
      (*labels)(r, c) = p1 > 0.5 ? 1 : 0;
    }
  }
}

ContextModel estimate_context_model(const ScaleLoglik& loglik,
                                    const std::vector<ContextState>& ctx,
                                    int max_iter, double tol) {
  ContextModel cm;
  LabelGrid labels;
  Matrix posterior;
  for (int iter = 0; iter < max_iter; ++iter) {
    fuse_scale(loglik, ctx, cm, &labels, &posterior);

    std::array<double, 4> sum1 = {0, 0, 0, 0};
    std::array<double, 4> count = {0, 0, 0, 0};
    int cols = posterior.cols();
    for (int r = 0; r < posterior.rows(); ++r) {
      for (int c = 0; c < cols; ++c) {
        int v = ctx[static_cast<size_t>(r) * cols + c].index();
        sum1[v] += posterior(r, c);
        count[v] += 1.0;
      }
    }
    double change = 0.0;
    for (int v = 0; v < 4; ++v) {
      if (count[v] == 0.0) continue;  // unseen context stays uniform
      double p1 = (sum1[v] + kTableClamp) / (count[v] + 2.0 * kTableClamp);
      auto row = clamp_row({1.0 - p1, p1});
      change = std::max(change, std::abs(row[1] - cm.p[v][1]));
      cm.p[v] = row;
    }
    if (change < tol) break;
  }
  return cm;
}

CascadeResult map_cascade(const std::vector<ScaleLoglik>& logliks,
                          const LevelPriors& priors) {
  int levels = static_cast<int>(logliks.size());
  if (levels < 1) throw Error("map_cascade: no scales");
  CascadeResult out;
  out.labels.resize(levels);
  out.posterior.resize(levels);

  // Coarsest scale: ML labels, posterior from the level prior.
  {
    const ScaleLoglik& ll = logliks[levels - 1];
    const std::array<double, 2>& prior = priors.p[levels - 1];
    int rows = ll.surround.rows();
    int cols = ll.surround.cols();
    out.labels[levels - 1] = LabelGrid(rows, cols);
    out.posterior[levels - 1] = Matrix(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        std::array<double, 2> lk = {ll.surround(r, c), ll.centre(r, c)};
        out.labels[levels - 1](r, c) = static_cast<std::uint8_t>(ml_label(lk));
        out.posterior[levels - 1](r, c) = posterior_from_logs(
            lk[0] + std::log(prior[0]), lk[1] + std::log(prior[1]));
      }
    }
  }

  for (int j = levels - 1; j >= 1; --j) {
    const ScaleLoglik& ll = logliks[j - 1];
    int rows = ll.surround.rows();
    int cols = ll.surround.cols();
    std::vector<ContextState> ctx(static_cast<size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        ctx[static_cast<size_t>(r) * cols + c] = context_of(out.labels[j], r, c);
      }
    }
    ContextModel cm = estimate_context_model(ll, ctx);
    fuse_scale(ll, ctx, cm, &out.labels[j - 1], &out.posterior[j - 1]);
  }
  return out;
}

}  // namespace mdis

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

#include "mdis/em.hpp"

#include <algorithm>
#include <cmath>

#include "mdis/errors.hpp"
#include "mdis/internal/emission.hpp"

namespace mdis {

namespace {

constexpr double kVarFloor = 1e-8;
constexpr double kCovRidge = 1e-8;
constexpr double kProbClamp = 1e-9;

using State2 = std::array<double, 2>;

// Traits that close over everything that differs between the scalar and
// vector models: emission caching, second-moment accumulation, and the
// variance M-step.

struct ScalarTraits {
  using Params = ScalarHmtParams;
  using Forest = ScalarForest;
  using Emission = internal::ScalarEmission;
  // Per level and state: sum of gamma * w^2.
  using MomentStats = std::vector<State2>;

  static MomentStats zero_moments(int levels) {
    return MomentStats(levels, State2{0.0, 0.0});
  }
  static void accumulate(MomentStats& ms, int level, double w,
                         const State2& gamma) {
    double ww = w * w;
    ms[level - 1][0] += gamma[0] * ww;
    ms[level - 1][1] += gamma[1] * ww;
  }
  static void update_emissions(Params& p, const MomentStats& ms,
                               const std::vector<State2>& mass) {
    for (int j = 0; j < p.levels; ++j) {
      if (mass[j][0] > 1e-12) {
        p.sigma2_S[j] = std::max(ms[j][0] / mass[j][0], kVarFloor);
      }
      if (mass[j][1] > 1e-12) {
        p.sigma2_L[j] = std::max(ms[j][1] / mass[j][1], kVarFloor);
      }
    }
  }
  static double spread(const Params& p, int j) {
    return p.sigma2_L[j] - p.sigma2_S[j];
  }
  static void swap_level(Params& p, int j) {
    std::swap(p.sigma2_S[j], p.sigma2_L[j]);
  }
  static bool all_zero(const Forest& f) {
    for (const auto& n : f.nodes) {
      if (n.value != 0.0) return false;
    }
    return true;
  }
};

struct VectorTraits {
  using Params = VectorHmtParams;
  using Forest = VectorForest;
  using Emission = internal::VectorEmission;
  // Per level: symmetric outer-product sums for both states.
  using MomentStats = std::vector<std::array<Cov3, 2>>;

  static MomentStats zero_moments(int levels) {
    return MomentStats(levels);
  }
  static void accumulate(MomentStats& ms, int level, const Vec3& w,
                         const State2& gamma) {
    for (int m = 0; m < 2; ++m) {
      Cov3& acc = ms[level - 1][m];
      double g = gamma[m];
      for (int r = 0; r < 3; ++r) {
        for (int c = r; c < 3; ++c) acc.at(r, c) += g * w[r] * w[c];
      }
    }
  }
  static void update_emissions(Params& p, const MomentStats& ms,
                               const std::vector<State2>& mass) {
    for (int j = 0; j < p.levels; ++j) {
      for (int m = 0; m < 2; ++m) {
        if (mass[j][m] <= 1e-12) continue;
        Cov3 c;
        for (int r = 0; r < 3; ++r) {
          for (int cc = r; cc < 3; ++cc) {
            double v = ms[j][m].at(r, cc) / mass[j][m];
            c.at(r, cc) = v;
            c.at(cc, r) = v;
          }
        }
        for (int r = 0; r < 3; ++r) c.at(r, r) += kCovRidge;
        (m == kStateS ? p.cov_S[j] : p.cov_L[j]) = c;
      }
    }
  }
  static double spread(const Params& p, int j) {
    return p.cov_L[j].trace() - p.cov_S[j].trace();
  }
  static void swap_level(Params& p, int j) {
    std::swap(p.cov_S[j], p.cov_L[j]);
  }
  static bool all_zero(const Forest& f) {
    for (const auto& n : f.nodes) {
      if (n.value[0] != 0.0 || n.value[1] != 0.0 || n.value[2] != 0.0) {
        return false;
      }
    }
    return true;
  }
};

void swap_states(Transition& a) { a = {a[3], a[2], a[1], a[0]}; }

State2 clamp_pmf(State2 p) {
  p[0] = std::clamp(p[0], kProbClamp, 1.0 - kProbClamp);
  p[1] = std::clamp(p[1], kProbClamp, 1.0 - kProbClamp);
  double z = p[0] + p[1];
  return {p[0] / z, p[1] / z};
}

template <typename Traits>
EmInfo train(const typename Traits::Forest& forest,
             typename Traits::Params* params, const EmOptions& opts) {
  using Params = typename Traits::Params;
  Params& p = *params;
  p.validate();
  if (forest.levels > p.levels) throw Error("em_train: forest deeper than init");
  for (int j = 0; j < forest.levels; ++j) {
    if (forest.by_level.at(j).empty()) {
      throw Error("em_train: a level has no coefficients");
    }
  }

  size_t n = forest.nodes.size();
  std::vector<State2> emit(n);       // scaled emissions, max = 1
  std::vector<State2> beta(n);       // scaled subtree likelihoods, max = 1
  std::vector<double> beta_scale(n); // log of the dropped factor
  std::vector<State2> msg(n);        // transition-mixed beta, child -> parent
  std::vector<State2> alpha(n);      // normalized downward variables
  std::vector<State2> gamma(n);      // state posteriors

  EmInfo info;
  info.degenerate = Traits::all_zero(forest);
  double prev_ll = 0.0;

  for (int iter = 0; iter < std::max(opts.max_iter, 1); ++iter) {
    typename Traits::Emission emission(p);

    // Upward pass, bottom-up thanks to the storage order.
    double ll = 0.0;
    for (size_t idx = n; idx-- > 0;) {
      const auto& node = forest.nodes[idx];
      std::array<double, 2> le = emission.log_density(node.level, node.value);
      double shift = std::max(le[0], le[1]);
      emit[idx] = {std::exp(le[0] - shift), std::exp(le[1] - shift)};

      State2 b = emit[idx];
      double scale = shift;
      for (int k = 0; k < node.n_children; ++k) {
        int c = node.children[k];
        const Transition& a = p.transition[forest.nodes[c].level - 1];
        msg[c] = {a[0] * beta[c][0] + a[1] * beta[c][1],
                  a[2] * beta[c][0] + a[3] * beta[c][1]};
        b[0] *= msg[c][0];
        b[1] *= msg[c][1];
        scale += beta_scale[c];
      }
      double m = std::max(b[0], b[1]);
      beta[idx] = {b[0] / m, b[1] / m};
      beta_scale[idx] = scale + std::log(m);
    }
    for (int r : forest.roots) {
      ll += std::log(beta[r][0] * p.root[0] + beta[r][1] * p.root[1]) +
            beta_scale[r];
    }
    info.loglik_trace.push_back(ll);

    bool converged =
        iter > 0 && (ll - prev_ll) < opts.tol * std::max(std::abs(prev_ll), 1e-12);
    prev_ll = ll;
    if (converged || iter == opts.max_iter - 1) break;

    // Downward pass and sufficient statistics.
    auto moments = Traits::zero_moments(p.levels);
    std::vector<State2> mass(p.levels, State2{0.0, 0.0});
    std::vector<std::array<double, 4>> trans_stats(p.levels, {0, 0, 0, 0});
    State2 root_stats = {0.0, 0.0};

    for (size_t idx = 0; idx < n; ++idx) {
      const auto& node = forest.nodes[idx];
      if (node.parent < 0) {
        alpha[idx] = p.root;
        double z0 = alpha[idx][0] * beta[idx][0];
        double z1 = alpha[idx][1] * beta[idx][1];
        double z = z0 + z1;
        gamma[idx] = {z0 / z, z1 / z};
        root_stats[0] += gamma[idx][0];
        root_stats[1] += gamma[idx][1];
      } else {
        size_t pa = static_cast<size_t>(node.parent);
        const auto& pnode = forest.nodes[pa];
        // Parent's beta with this child's message divided back out,
        // recomputed as an explicit sibling product for stability.
        State2 bexc = emit[pa];
        for (int k = 0; k < pnode.n_children; ++k) {
          int sib = pnode.children[k];
          if (static_cast<size_t>(sib) == idx) continue;
          bexc[0] *= msg[sib][0];
          bexc[1] *= msg[sib][1];
        }
        double bm = std::max(bexc[0], bexc[1]);
        bexc = {bexc[0] / bm, bexc[1] / bm};

        const Transition& a = p.transition[node.level - 1];
        // xi[parent state][child state], normalized over all four cells.
        std::array<double, 4> xi;
        double z = 0.0;
        for (int mp = 0; mp < 2; ++mp) {
          double common = alpha[pa][mp] * bexc[mp];
          for (int mc = 0; mc < 2; ++mc) {
            double v = common * a[2 * mp + mc] * beta[idx][mc];
            xi[2 * mp + mc] = v;
            z += v;
          }
        }
        for (double& v : xi) v /= z;
        gamma[idx] = {xi[0] + xi[2], xi[1] + xi[3]};
        for (int k = 0; k < 4; ++k) trans_stats[node.level - 1][k] += xi[k];

        double a0 = a[0] * alpha[pa][0] * bexc[0] + a[2] * alpha[pa][1] * bexc[1];
        double a1 = a[1] * alpha[pa][0] * bexc[0] + a[3] * alpha[pa][1] * bexc[1];
        double az = a0 + a1;
        alpha[idx] = {a0 / az, a1 / az};
      }
      Traits::accumulate(moments, node.level, node.value, gamma[idx]);
      mass[node.level - 1][0] += gamma[idx][0];
      mass[node.level - 1][1] += gamma[idx][1];
    }

    // M-step.
    Traits::update_emissions(p, moments, mass);
    for (int j = 0; j < p.levels; ++j) {
      const auto& t = trans_stats[j];
      Transition a = p.transition[j];
      if (t[0] + t[1] > 1e-12) {
        State2 row = clamp_pmf({t[0] / (t[0] + t[1]), t[1] / (t[0] + t[1])});
        a[0] = row[0];
        a[1] = row[1];
      }
      if (t[2] + t[3] > 1e-12) {
        State2 row = clamp_pmf({t[2] / (t[2] + t[3]), t[3] / (t[2] + t[3])});
        a[2] = row[0];
        a[3] = row[1];
      }
      p.transition[j] = a;
    }
    double nroots = static_cast<double>(forest.roots.size());
    p.root = clamp_pmf({root_stats[0] / nroots, root_stats[1] / nroots});

    // Restore the (S, L) order. A full label swap leaves the distribution
    // unchanged; a per-level swap is a last resort for mixed orderings.
    double total_spread = 0.0;
    for (int j = 0; j < p.levels; ++j) total_spread += Traits::spread(p, j);
    if (total_spread < 0.0) {
      for (int j = 0; j < p.levels; ++j) {
        Traits::swap_level(p, j);
        swap_states(p.transition[j]);
      }
      std::swap(p.root[0], p.root[1]);
    }
    for (int j = 0; j < p.levels; ++j) {
      if (Traits::spread(p, j) < 0.0) Traits::swap_level(p, j);
    }
    p.validate();
  }

  info.final_loglik = info.loglik_trace.back();
  info.iterations = static_cast<int>(info.loglik_trace.size());
  return info;
}

}  // namespace

EmInfo em_train(const ScalarForest& forest, ScalarHmtParams* params,
                const EmOptions& opts) {
  return train<ScalarTraits>(forest, params, opts);
}

EmInfo em_train(const VectorForest& forest, VectorHmtParams* params,
                const EmOptions& opts) {
  return train<VectorTraits>(forest, params, opts);
}

ScalarHmtParams default_scalar_init(const ScalarForest& forest) {
  if (forest.levels < 1) throw Error("default_scalar_init: empty forest");
  ScalarHmtParams p;
  p.levels = forest.levels;
  p.sigma2_S.resize(p.levels);
  p.sigma2_L.resize(p.levels);
  p.transition.assign(p.levels, Transition{0.8, 0.2, 0.2, 0.8});
  p.root = {0.5, 0.5};
  for (int j = 0; j < p.levels; ++j) {
    double sum = 0.0;
    for (int id : forest.by_level[j]) {
      double w = forest.nodes[id].value;
      sum += w * w;
    }
    double var =
        std::max(sum / static_cast<double>(forest.by_level[j].size()), kVarFloor);
    p.sigma2_S[j] = std::max(0.25 * var, kVarFloor);
    p.sigma2_L[j] = 4.0 * var;
  }
  p.validate();
  return p;
}

VectorHmtParams default_vector_init(const VectorForest& forest) {
  if (forest.levels < 1) throw Error("default_vector_init: empty forest");
  VectorHmtParams p;
  p.levels = forest.levels;
  p.cov_S.resize(p.levels);
  p.cov_L.resize(p.levels);
  p.transition.assign(p.levels, Transition{0.8, 0.2, 0.2, 0.8});
  p.root = {0.5, 0.5};
  for (int j = 0; j < p.levels; ++j) {
    Cov3 sum;
    for (int id : forest.by_level[j]) {
      const Vec3& w = forest.nodes[id].value;
      for (int r = 0; r < 3; ++r) {
        for (int c = r; c < 3; ++c) sum.at(r, c) += w[r] * w[c];
      }
    }
    double inv_n = 1.0 / static_cast<double>(forest.by_level[j].size());
    Cov3 var;
    for (int r = 0; r < 3; ++r) {
      for (int c = r; c < 3; ++c) {
        var.at(r, c) = sum.at(r, c) * inv_n;
        var.at(c, r) = var.at(r, c);
      }
    }
    for (int r = 0; r < 3; ++r) var.at(r, r) += kCovRidge;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        p.cov_S[j].at(r, c) = 0.25 * var.at(r, c);
        p.cov_L[j].at(r, c) = 4.0 * var.at(r, c);
      }
    }
  }
  p.validate();
  return p;
}

}  // namespace mdis

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

#include "mdis/hmt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mdis/errors.hpp"

namespace mdis {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_transition(const Transition& a, const char* who) {
  for (double v : a) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(std::string(who) + ": transition entry out of [0,1]");
  }
  if (std::abs(a[0] + a[1] - 1.0) > 1e-12 || std::abs(a[2] + a[3] - 1.0) > 1e-12) {
    throw Error(std::string(who) + ": transition rows must sum to 1");
  }
}

void check_root(const std::array<double, 2>& p, const char* who) {
  if (!(p[0] >= 0.0 && p[1] >= 0.0) || std::abs(p[0] + p[1] - 1.0) > 1e-12) {
    throw Error(std::string(who) + ": root pmf must sum to 1");
  }
}

}  // namespace

Cov3 Cov3::identity(double scale) {
  Cov3 c;
  c.at(0, 0) = c.at(1, 1) = c.at(2, 2) = scale;
  return c;
}

double Cov3::det() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Cov3 Cov3::inverse() const {
  double d = det();
  if (!(std::abs(d) > 0.0) || !std::isfinite(d)) {
    throw Error("Cov3: singular covariance matrix");
  }
  Cov3 inv;
  inv.m = {(m[4] * m[8] - m[5] * m[7]), (m[2] * m[7] - m[1] * m[8]),
           (m[1] * m[5] - m[2] * m[4]), (m[5] * m[6] - m[3] * m[8]),
           (m[0] * m[8] - m[2] * m[6]), (m[2] * m[3] - m[0] * m[5]),
           (m[3] * m[7] - m[4] * m[6]), (m[1] * m[6] - m[0] * m[7]),
           (m[0] * m[4] - m[1] * m[3])};
  for (double& v : inv.m) v /= d;
  return inv;
}

bool Cov3::is_spd() const {
  // Cholesky on the symmetric part.
  double l00 = m[0];
  if (l00 <= 0.0) return false;
  l00 = std::sqrt(l00);
  double l10 = m[3] / l00;
  double l20 = m[6] / l00;
  double d1 = m[4] - l10 * l10;
  if (d1 <= 0.0) return false;
  double l11 = std::sqrt(d1);
  double l21 = (m[7] - l20 * l10) / l11;
  double d2 = m[8] - l20 * l20 - l21 * l21;
  return d2 > 0.0;
}

void ScalarHmtParams::validate() const {
  if (levels < 1) throw Error("ScalarHmtParams: levels must be >= 1");
  if (static_cast<int>(sigma2_S.size()) != levels ||
      static_cast<int>(sigma2_L.size()) != levels ||
      static_cast<int>(transition.size()) != levels) {
    throw Error("ScalarHmtParams: per-level array size mismatch");
  }
  for (int j = 0; j < levels; ++j) {
    if (!(sigma2_S[j] > 0.0) || !(sigma2_L[j] >= sigma2_S[j])) {
      throw Error("ScalarHmtParams: need 0 < sigma2_S <= sigma2_L per level");
    }
    check_transition(transition[j], "ScalarHmtParams");
  }
  check_root(root, "ScalarHmtParams");
}

void VectorHmtParams::validate() const {
  if (levels < 1) throw Error("VectorHmtParams: levels must be >= 1");
  if (static_cast<int>(cov_S.size()) != levels ||
      static_cast<int>(cov_L.size()) != levels ||
      static_cast<int>(transition.size()) != levels) {
    throw Error("VectorHmtParams: per-level array size mismatch");
  }
  for (int j = 0; j < levels; ++j) {
    if (!cov_S[j].is_spd() || !cov_L[j].is_spd()) {
      throw Error("VectorHmtParams: covariance not SPD");
    }
    if (cov_L[j].trace() < cov_S[j].trace()) {
      throw Error("VectorHmtParams: tr(C_L) must be >= tr(C_S)");
    }
    check_transition(transition[j], "VectorHmtParams");
  }
  check_root(root, "VectorHmtParams");
}

ScalarHmtParams universal_params(int levels) {
  if (levels < 1) throw Error("universal_params: levels must be >= 1");
  using U = UniversalConstants;
  ScalarHmtParams p;
  p.levels = levels;
  p.sigma2_S.resize(levels);
  p.sigma2_L.resize(levels);
  p.transition.resize(levels);
  p.root = {1.0 - U::pL_root, U::pL_root};
  auto persist = [](double c, double lambda, int j) {
    double v = 1.0 - c * std::exp2(-lambda * j);
    return std::clamp(v, 0.5, 1.0 - 1e-6);
  };
  for (int j = 1; j <= levels; ++j) {
    p.sigma2_S[j - 1] = U::C_alpha_S * std::exp2(-U::alpha_S * j);
    p.sigma2_L[j - 1] = U::C_alpha_L * std::exp2(-U::alpha_L * j);
    double ss = persist(U::C_SS, U::lambda_S, j);
    double ll = persist(U::C_LL, U::lambda_L, j);
    p.transition[j - 1] = {ss, 1.0 - ss, 1.0 - ll, ll};
  }
  p.validate();
  return p;
}

double gauss_pdf(double x, double sigma2) {
  if (!(sigma2 > 0.0)) throw Error("gauss_pdf: variance must be positive");
  return std::exp(-0.5 * x * x / sigma2) / std::sqrt(kTwoPi * sigma2);
}

double log_gauss_pdf(double x, double sigma2) {
  if (!(sigma2 > 0.0)) throw Error("log_gauss_pdf: variance must be positive");
  return -0.5 * (x * x / sigma2 + std::log(kTwoPi * sigma2));
}

double mixture_pdf(double w, const ScalarHmtParams& params, int level,
                   const std::array<double, 2>& prior) {
  if (level < 1 || level > params.levels) throw Error("mixture_pdf: bad level");
  if (std::abs(prior[0] + prior[1] - 1.0) > 1e-9) {
    throw Error("mixture_pdf: prior must sum to 1");
  }
  return prior[kStateS] * gauss_pdf(w, params.sigma2_S[level - 1]) +
         prior[kStateL] * gauss_pdf(w, params.sigma2_L[level - 1]);
}

double log_mvn_pdf(const Vec3& w, const Cov3& C) {
  if (!C.is_spd()) throw Error("mvn_pdf: covariance must be SPD");
  Cov3 inv = C.inverse();
  double q = 0.0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) q += w[r] * inv.at(r, c) * w[c];
  }
  return -0.5 * (3.0 * std::log(kTwoPi) + std::log(C.det()) + q);
}

double mvn_pdf(const Vec3& w, const Cov3& C) {
  return std::exp(log_mvn_pdf(w, C));
}

}  // namespace mdis

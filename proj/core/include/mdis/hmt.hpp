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

#ifndef MDIS_HMT_HPP
#define MDIS_HMT_HPP

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace mdis {

// Hidden states: S = small variance (index 0), L = large variance (index 1).
// Throughout the classifier, surround = S = class 0 and centre = L = class 1.
inline constexpr int kStateS = 0;
inline constexpr int kStateL = 1;

using Vec3 = std::array<double, 3>;

// Symmetric positive-definite 3x3 covariance over (LH, HL, HH) coefficients.
struct Cov3 {
  // Row-major, kept symmetric by construction.
  std::array<double, 9> m{};

  double& at(int r, int c) { return m[3 * r + c]; }
  double at(int r, int c) const { return m[3 * r + c]; }

  static Cov3 identity(double scale = 1.0);
  double trace() const { return m[0] + m[4] + m[8]; }
  double det() const;
  Cov3 inverse() const;    // throws on singular input
  bool is_spd() const;     // Cholesky succeeds
};

// Parent->child state transition, row-major: [S->S, S->L, L->S, L->L].
using Transition = std::array<double, 4>;

// Two-state scalar mixture parameters, tied within scale. transition[j-1]
// carries the transition into level j (children at level j, parents at j+1);
// the entry at the root level is kept valid but unused.
struct ScalarHmtParams {
  int levels = 0;
  std::vector<double> sigma2_S;        // [levels], index level-1
  std::vector<double> sigma2_L;
  std::vector<Transition> transition;  // [levels]
  std::array<double, 2> root = {0.5, 0.5};

  void validate() const;  // throws Error on a broken invariant
};

// Vector variant: 3x3 covariance emissions over stacked band coefficients.
struct VectorHmtParams {
  int levels = 0;
  std::vector<Cov3> cov_S;             // [levels]
  std::vector<Cov3> cov_L;
  std::vector<Transition> transition;  // [levels]
  std::array<double, 2> root = {0.5, 0.5};

  void validate() const;
};

// Fixed natural-image constants for the universal model.
struct UniversalConstants {
  static constexpr double alpha_S = 3.1;
  static constexpr double C_alpha_S = 2048.0;  // 2^11
  static constexpr double alpha_L = 2.25;
  static constexpr double C_alpha_L = 2048.0;  // 2^11
  static constexpr double lambda_S = 1.0;
  static constexpr double C_SS = 4.924577653379664;   // 2^2.3
  static constexpr double lambda_L = 0.4;
  static constexpr double C_LL = 1.4142135623730951;  // 2^0.5
  static constexpr double pL_root = 0.5;
};

// sigma^2_m[j] = C_alpha_m * 2^(-alpha_m * j); persistence
// 1 - C * 2^(-lambda * j) clamped to [1/2, 1 - 1e-6]. The same parameter set
// serves all three bands.
ScalarHmtParams universal_params(int levels);

// Zero-mean Gaussian density. sigma2 must be positive.
double gauss_pdf(double x, double sigma2);
double log_gauss_pdf(double x, double sigma2);

// Two-state marginal at one level: prior[S]*g(w;s2_S) + prior[L]*g(w;s2_L).
double mixture_pdf(double w, const ScalarHmtParams& params, int level,
                   const std::array<double, 2>& prior);

// Zero-mean trivariate Gaussian with the conventional 1/2 in the exponent.
double mvn_pdf(const Vec3& w, const Cov3& C);
double log_mvn_pdf(const Vec3& w, const Cov3& C);

// Flat key=value model files, one entry per line, shortest round-trip floats.
using HmtModel = std::variant<ScalarHmtParams, VectorHmtParams>;
void save_model(const std::string& path, const HmtModel& model);
HmtModel load_model(const std::string& path);

}  // namespace mdis

#endif  // MDIS_HMT_HPP

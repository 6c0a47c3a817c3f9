// Copyright 2026 The stigma-welfare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <vector>

#include "stigma/distributions.hpp"
#include "stigma/errors.hpp"
#include "stigma/params.hpp"

// Period 1: pairs coordinate on safe or unsafe sex; present bias beta below
// the hot threshold favours the unsafe equilibrium.
namespace stigma {

enum class Regime { kInterior, kAllUnsafe };
enum class PairOutcome { kSafe, kUnsafe };

struct Period1Outcome {
  double beta_star = 0.0;
  double H = 0.0;
  double r = 0.0;
  Regime regime = Regime::kInterior;
};

inline const char* to_string(Regime regime) {
  return regime == Regime::kInterior ? "interior" : "all_unsafe";
}

// beta* = u / (EV_L - EV_H). Values >= 1 mean everyone is hot.
inline double hot_threshold(double u, double gap) {
  if (!(gap > 0.0)) {
    throw AssumptionViolation(3, "continuation gap EV_L - EV_H must be > 0");
  }
  return u / gap;
}

inline double hot_fraction(const Distribution& dist_beta, double beta_star) {
  return dist_beta.cdf(std::min(beta_star, 1.0));
}

// Hot-hot pairs go unsafe, cold-cold pairs safe; mixed pairs pick the
// equilibrium with the larger joint period-1 utility, which is unsafe iff
// beta_1 + beta_2 < 2 beta*. Ties resolve to safe; beta == beta* is cold.
inline PairOutcome pair_outcome(double beta_1, double beta_2,
                                double beta_star) {
  const bool hot_1 = beta_1 < beta_star;
  const bool hot_2 = beta_2 < beta_star;
  if (hot_1 && hot_2) return PairOutcome::kUnsafe;
  if (!hot_1 && !hot_2) return PairOutcome::kSafe;
  return beta_1 + beta_2 < 2.0 * beta_star ? PairOutcome::kUnsafe
                                           : PairOutcome::kSafe;
}

// r = H^2 + 2 int_{beta*}^{min(2 beta*, hi)} F(2 beta* - b) dF(b).
inline double high_risk_fraction(const Distribution& dist_beta,
                                 double beta_star,
                                 double tol = kDefaultQuadratureTol) {
  if (!(beta_star > 0.0)) return 0.0;
  const double H = hot_fraction(dist_beta, beta_star);
  if (H >= 1.0) return 1.0;
  const double upper = std::min(2.0 * beta_star, dist_beta.support_hi());
  // F(2 beta* - b) has kinks where 2 beta* - b crosses a knot.
  std::vector<double> kinks;
  for (const Knot& k : dist_beta.knots()) kinks.push_back(2.0 * beta_star - k.x);
  const double mixed = integrate_against(
      dist_beta, [&](double b) { return dist_beta.cdf(2.0 * beta_star - b); },
      beta_star, upper, kinks, tol);
  return std::clamp(H * H + 2.0 * mixed, 0.0, 1.0);
}

// Regime split: u >= gap puts every pair on the unsafe equilibrium.
inline Period1Outcome period1_outcome(const ModelParams& p, double gap) {
  Period1Outcome out;
  out.beta_star = hot_threshold(p.u, gap);
  if (p.u >= gap) {
    out.H = 1.0;
    out.r = 1.0;
    out.regime = Regime::kAllUnsafe;
    return out;
  }
  out.H = hot_fraction(p.dist_beta, out.beta_star);
  out.r = high_risk_fraction(p.dist_beta, out.beta_star);
  out.regime = Regime::kInterior;
  return out;
}

}  // namespace stigma

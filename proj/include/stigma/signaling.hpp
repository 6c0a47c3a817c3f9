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
#include <limits>
#include <utility>

#include "stigma/params.hpp"

// Period 2: testing (stage 2) and interaction (stage 3) in the partially
// separating equilibrium.
namespace stigma {

enum class Risk { kLow, kHigh };

struct TestingRates {
  double R_H = 0.0;  // testing rate among high-risk agents
  double R = 0.0;    // population testing rate
};

struct ContinuationValues {
  double EV_L = 0.0;
  double EV_H = 0.0;
  double gap = 0.0;  // EV_L - EV_H
};

struct Period2Outcome {
  double S = 0.0;
  double y_star = 0.0;  // +inf when S = 0
  double R_H = 0.0;
  double R = 0.0;
  double EV_L = 0.0;
  double EV_H = 0.0;
  double gap = 0.0;
  double h_bar = 0.0;
  double belief_tested = 0.0;
  std::pair<double, double> belief_untested_range{0.0, 0.0};
};

// Fraction of partners who reject any agent observed testing.
inline double stigma_level(const ModelParams& p) {
  return p.dist_y.cdf(p.rejection_cutoff());
}

// Valuation below which a high-risk agent tests; +inf when nobody stigmatizes.
inline double testing_threshold(const ModelParams& p, double S) {
  if (S <= 0.0) return std::numeric_limits<double>::infinity();
  return p.high_risk_test_gain() / S;
}

inline TestingRates testing_rates(const ModelParams& p, double S, double r) {
  TestingRates out;
  out.R_H = p.dist_y.cdf(testing_threshold(p, S));
  out.R = r * out.R_H;
  return out;
}

// Strict inequality: indifferent agents do not test. c_h never enters.
inline bool best_response_test(double theta_a, double y_a, double S,
                               const ModelParams& p) {
  return theta_a * p.v - p.c - S * y_a > 0.0;
}

// Untested agents are always accepted; tested ones only by partners whose
// valuation strictly exceeds the perceived expected cost.
inline bool best_response_interact(bool tested, double y_b,
                                   const ModelParams& p) {
  if (!tested) return true;
  return y_b > p.rejection_cutoff();
}

// Expected value of the high-risk testing option,
//   int_0^{min(y*, hi)} (theta_H v - c - S y) dG(y),
// in closed form from the CDF and the truncated first moment.
inline double testing_bonus(const ModelParams& p, double S) {
  const double y_star = testing_threshold(p, S);
  const double gain = p.high_risk_test_gain();
  if (S <= 0.0) return gain * p.dist_y.cdf(y_star);
  return gain * p.dist_y.cdf(y_star) - S * p.dist_y.partial_expectation(y_star);
}

inline ContinuationValues continuation_values(const ModelParams& p, double S) {
  const double mean_y = p.dist_y.mean();
  ContinuationValues cv;
  cv.EV_L = mean_y - p.theta_L * p.c_h;
  cv.EV_H = mean_y - p.theta_H * p.c_h + testing_bonus(p, S);
  cv.gap = cv.EV_L - cv.EV_H;
  return cv;
}

// Period-2 payoff of an agent with valuation y_a entering as the given type.
inline double pointwise_continuation(const ModelParams& p, double S,
                                     double y_a, Risk risk) {
  if (risk == Risk::kLow) return y_a - p.theta_L * p.c_h;
  double value = y_a - p.theta_H * p.c_h;
  if (y_a < testing_threshold(p, S)) {
    value += p.high_risk_test_gain() - y_a * S;
  }
  return value;
}

inline double fraction_positive(const ModelParams& p, double r) {
  return r * p.theta_H + (1.0 - r) * p.theta_L;
}

// Assembles the period-2 outcome given stigma S and the high-risk share r.
inline Period2Outcome period2_outcome(const ModelParams& p, double S,
                                      double r) {
  Period2Outcome out;
  out.S = S;
  out.y_star = testing_threshold(p, S);
  const TestingRates rates = testing_rates(p, S, r);
  out.R_H = rates.R_H;
  out.R = rates.R;
  const ContinuationValues cv = continuation_values(p, S);
  out.EV_L = cv.EV_L;
  out.EV_H = cv.EV_H;
  out.gap = cv.gap;
  out.h_bar = fraction_positive(p, r);
  out.belief_tested = p.theta_H;
  out.belief_untested_range = {p.theta_L, out.h_bar};
  return out;
}

}  // namespace stigma

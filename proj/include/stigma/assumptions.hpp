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

#include "stigma/coordination.hpp"
#include "stigma/signaling.hpp"

namespace stigma {

struct AssumptionReport {
  // testing participation: theta_L v < c < theta_H v
  bool a1 = false;
  double a1_low_margin = 0.0;   // c - theta_L v
  double a1_high_margin = 0.0;  // theta_H v - c

  // interaction participation: mass of partners with
  // epsilon < y_b < tau_hat * h_bar * z (0 means satisfied)
  bool a2 = false;
  double a2_violating_mass = 0.0;
  double h_bar = 0.0;
  double r = 0.0;

  // utility gap: c_h > ((theta_H v - c) - epsilon S) / (theta_H - theta_L)
  bool a3 = false;
  double a3_threshold = 0.0;
  double a3_margin = 0.0;  // c_h - threshold

  double epsilon = 0.0;
};

inline double interaction_violating_mass(const ModelParams& p, double h_bar,
                                         double epsilon = 0.0) {
  const double cutoff = p.tau_hat * h_bar * p.z;
  return std::max(0.0, p.dist_y.cdf(cutoff) - p.dist_y.cdf(epsilon));
}

// Reports all three standing assumptions with their margins. Never throws
// on a violation; strict enforcement belongs to the caller.
inline AssumptionReport check_assumptions(const ModelParams& p,
                                          double epsilon = 0.0) {
  AssumptionReport rep;
  rep.epsilon = epsilon;
  rep.a1_low_margin = p.c - p.theta_L * p.v;
  rep.a1_high_margin = p.theta_H * p.v - p.c;
  rep.a1 = rep.a1_low_margin > 0.0 && rep.a1_high_margin > 0.0;

  const double S = stigma_level(p);
  rep.a3_threshold =
      (p.high_risk_test_gain() - epsilon * S) / (p.theta_H - p.theta_L);
  rep.a3_margin = p.c_h - rep.a3_threshold;
  rep.a3 = rep.a3_margin > 0.0;

  // Without a positive gap every pair prefers the unsafe equilibrium.
  const double gap = continuation_values(p, S).gap;
  rep.r = gap > 0.0 ? period1_outcome(p, gap).r : 1.0;
  rep.h_bar = fraction_positive(p, rep.r);
  rep.a2_violating_mass = interaction_violating_mass(p, rep.h_bar, epsilon);
  rep.a2 = rep.a2_violating_mass == 0.0;
  return rep;
}

}  // namespace stigma

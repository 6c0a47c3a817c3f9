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
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "stigma/coordination.hpp"
#include "stigma/errors.hpp"
#include "stigma/params.hpp"
#include "stigma/signaling.hpp"

namespace stigma {

// How the welfare of partners who discriminate against tested agents is
// booked. kCorrected: a discriminator meets a tested agent with probability
// R and then forgoes y_b, earning (1 - R) y_b. kPaperLiteral: the literal
// R y_b booking, kept for comparison.
enum class Convention { kCorrected, kPaperLiteral };

inline const char* to_string(Convention c) {
  return c == Convention::kCorrected ? "corrected" : "paper";
}

// Full equilibrium chain at one perceived risk:
// tau_hat -> S -> (EV_L, EV_H, gap) -> (beta*, H, r) -> (R_H, R).
struct Equilibrium {
  double tau_hat = 0.0;
  Period2Outcome period2;
  Period1Outcome period1;
};

inline Equilibrium solve_equilibrium(const ModelParams& p) {
  Equilibrium eq;
  eq.tau_hat = p.tau_hat;
  const double S = stigma_level(p);
  const double gap = continuation_values(p, S).gap;
  eq.period1 = period1_outcome(p, gap);
  eq.period2 = period2_outcome(p, S, eq.period1.r);
  return eq;
}

struct WelfareComponents {
  double welfare_high = 0.0;               // r (M + EV_H)
  double welfare_low = 0.0;                // (1 - r)(M - u + EV_L)
  double welfare_B_discriminators = 0.0;   // partners with y_b < cutoff
  double welfare_B_accepters = 0.0;        // partners with y_b >= cutoff
};

struct WelfareReport {
  double W_A = 0.0;
  double W_B = 0.0;
  double W = 0.0;
  WelfareComponents components;
  Convention wb_convention = Convention::kCorrected;
  Equilibrium state;
};

// Preconditions shared by every welfare evaluation.
inline void require_welfare_assumptions(const ModelParams& p) {
  p.validate();
  if (!(p.c_h * (p.theta_H - p.theta_L) > p.high_risk_test_gain())) {
    throw AssumptionViolation(
        3, "c_h must exceed (theta_H v - c) / (theta_H - theta_L)");
  }
  if (p.tau_true != 0.0) {
    throw InvalidArgument("tau_true: welfare analysis requires tau_true = 0");
  }
}

// Utilitarian welfare in experience utility (beta = 1 for every agent).
inline WelfareReport welfare(const ModelParams& params, double tau_hat,
                             Convention convention = Convention::kCorrected) {
  const ModelParams p = params.with_tau_hat(tau_hat);
  require_welfare_assumptions(p);

  WelfareReport rep;
  rep.wb_convention = convention;
  rep.state = solve_equilibrium(p);
  const Period2Outcome& p2 = rep.state.period2;
  const double r = rep.state.period1.r;

  rep.components.welfare_high = r * (p.M + p2.EV_H);
  rep.components.welfare_low = (1.0 - r) * (p.M - p.u + p2.EV_L);
  rep.W_A = rep.components.welfare_high + rep.components.welfare_low;

  const double discriminated = p.dist_y.partial_expectation(p.rejection_cutoff());
  rep.components.welfare_B_accepters = p.dist_y.mean() - discriminated;
  rep.components.welfare_B_discriminators =
      convention == Convention::kCorrected ? (1.0 - p2.R) * discriminated
                                           : p2.R * discriminated;
  rep.W_B = rep.components.welfare_B_discriminators +
            rep.components.welfare_B_accepters;
  rep.W = rep.W_A + rep.W_B;
  return rep;
}

// No present bias and no misperception: every pair coordinates safely and
// every interaction is accepted.
inline WelfareReport first_best_benchmark(const ModelParams& params) {
  const ModelParams p = params.with_tau_hat(0.0);
  const double mean_y = p.dist_y.mean();
  WelfareReport rep;
  rep.components.welfare_low = p.M - p.u + mean_y - p.theta_L * p.c_h;
  rep.components.welfare_B_accepters = mean_y;
  rep.W_A = rep.components.welfare_low;
  rep.W_B = mean_y;
  rep.W = rep.W_A + rep.W_B;
  rep.state.tau_hat = 0.0;
  rep.state.period2 = period2_outcome(p, 0.0, 0.0);
  rep.state.period1 = {0.0, 0.0, 0.0, Regime::kInterior};
  return rep;
}

struct PresentBiasLoss {
  double r = 0.0;    // high-risk share at zero stigma
  double gap = 0.0;  // EV_L - EV_H at zero stigma
  // r * gap: per-capita period-2 loss of the agents who switched.
  double period2_loss = 0.0;
  // r * (gap - u): the switchers also keep the period-1 premium u. Equals
  // first_best_benchmark(p).W - welfare(p, 0).W.
  double benchmark_difference = 0.0;
};

inline PresentBiasLoss present_bias_loss(const ModelParams& params) {
  const ModelParams p = params.with_tau_hat(0.0);
  const double gap = continuation_values(p, 0.0).gap;
  const Period1Outcome p1 = period1_outcome(p, gap);
  PresentBiasLoss out;
  out.r = p1.r;
  out.gap = gap;
  out.period2_loss = p1.r * gap;
  out.benchmark_difference = p1.r * (gap - p.u);
  return out;
}

// Welfare change of moving perceived risk from 0 to tau_hat, split into
// the deterrence gain, suppression loss and partner loss terms.
struct PolicyDecomposition {
  double deterrence_gain = 0.0;
  double suppression_loss = 0.0;
  double b_loss = 0.0;
  double term_sum = 0.0;
  double exact_delta = 0.0;
  double residual = 0.0;  // exact_delta - term_sum
};

inline PolicyDecomposition decomposition(const ModelParams& params,
                                         double tau_hat) {
  const WelfareReport base = welfare(params, 0.0, Convention::kCorrected);
  const WelfareReport policy = welfare(params, tau_hat, Convention::kCorrected);
  const Equilibrium& e0 = base.state;
  const Equilibrium& e1 = policy.state;

  PolicyDecomposition d;
  d.deterrence_gain =
      (e0.period1.r - e1.period1.r) * (e1.period2.EV_L - e1.period2.EV_H);
  d.suppression_loss = e1.period1.r * (e1.period2.EV_H - e0.period2.EV_H);
  const ModelParams p = params.with_tau_hat(tau_hat);
  d.b_loss = -e1.period2.R * p.dist_y.partial_expectation(p.rejection_cutoff());
  d.term_sum = d.deterrence_gain + d.suppression_loss + d.b_loss;
  d.exact_delta = policy.W - base.W;
  d.residual = d.exact_delta - d.term_sum;
  return d;
}

struct SweepRow {
  double tau_hat = 0.0;
  double S = 0.0;
  double gap = 0.0;
  double H = 0.0;
  double r = 0.0;
  double R_H = 0.0;
  double R = 0.0;
  double W_A = 0.0;
  double W_B = 0.0;
  double W = 0.0;
};

inline SweepRow sweep_row(const WelfareReport& rep) {
  const Equilibrium& e = rep.state;
  return {e.tau_hat,   e.period2.S, e.period2.gap, e.period1.H, e.period1.r,
          e.period2.R_H, e.period2.R, rep.W_A,     rep.W_B,     rep.W};
}

inline SweepRow evaluate_row(const ModelParams& params, double tau_hat,
                             Convention convention = Convention::kCorrected) {
  return sweep_row(welfare(params, tau_hat, convention));
}

inline std::vector<double> uniform_grid(int points) {
  if (points < 2) throw InvalidArgument("grid: needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

namespace detail {

inline std::string at_tau(double tau) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "at tau_hat=%.12g: ", tau);
  return buf;
}

}  // namespace detail

// One row per grid point; a failing row aborts with its tau_hat named.
inline std::vector<SweepRow> sweep(const ModelParams& params,
                                   const std::vector<double>& grid,
                                   Convention convention = Convention::kCorrected) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
      throw InvalidArgument("grid: values must lie in [0,1]");
    }
    if (i > 0 && grid[i] < grid[i - 1]) {
      throw InvalidArgument("grid: values must be sorted");
    }
  }
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double tau : grid) {
    try {
      rows.push_back(evaluate_row(params, tau, convention));
    } catch (const AssumptionViolation& e) {
      throw AssumptionViolation(e.assumption(), detail::at_tau(tau) + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError(detail::at_tau(tau) + e.what());
    }
  }
  return rows;
}

struct TracePoint {
  std::string phase;  // "grid" or "golden"
  double tau_hat = 0.0;
  double W = 0.0;
};

struct OptimizeResult {
  double tau_star = 0.0;
  double W_star = 0.0;
  std::vector<TracePoint> trace;
};

// Coarse grid scan, then golden-section refinement on the interval that
// brackets the best grid point. W has kinks (e.g. where y* reaches the top of
// the valuation support), so no derivatives are used. Ties keep the earliest
// evaluation, so a flat curve yields tau_star = 0.
inline OptimizeResult optimize(const ModelParams& params, double tol,
                               Convention convention = Convention::kCorrected,
                               int grid_points = 101) {
  if (!(tol > 0.0)) throw InvalidArgument("tol: must be > 0");
  const std::vector<double> grid = uniform_grid(grid_points);
  auto W = [&](double t) { return welfare(params, t, convention).W; };

  OptimizeResult out;
  out.W_star = -std::numeric_limits<double>::infinity();
  auto record = [&](const char* phase, double t) {
    const double w = W(t);
    out.trace.push_back({phase, t, w});
    if (w > out.W_star) {
      out.W_star = w;
      out.tau_star = t;
    }
    return w;
  };

  for (double t : grid) record("grid", t);
  const auto best = static_cast<std::size_t>(
      std::find(grid.begin(), grid.end(), out.tau_star) - grid.begin());

  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = record("golden", x1);
  double f2 = record("golden", x2);
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = record("golden", x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = record("golden", x2);
    }
  }
  record("golden", 0.5 * (a + b));
  return out;
}

}  // namespace stigma

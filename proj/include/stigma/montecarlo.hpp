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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "stigma/coordination.hpp"
#include "stigma/errors.hpp"
#include "stigma/params.hpp"
#include "stigma/signaling.hpp"
#include "stigma/welfare.hpp"

// Agent-based oracle. Simulates a finite population through both periods
// using only pair-level decision rules and compares against the analytic
// chain.
namespace stigma {

struct SimConfig {
  std::uint64_t n_pairs = 500000;
  std::uint64_t seed = 1;
  double tau_hat = 0.0;
  Convention convention = Convention::kCorrected;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;  // standard error
};

struct PairCounts {
  std::uint64_t hot_hot = 0;
  std::uint64_t cold_cold = 0;
  std::uint64_t hot_cold_unsafe = 0;
  std::uint64_t hot_cold_safe = 0;
};

struct SimResult {
  std::uint64_t n_pairs = 0;
  Estimate r;    // high-risk share
  Estimate R;    // population testing rate
  Estimate R_H;  // testing rate among high-risk agents
  Estimate S;    // share of partners who would reject a tested agent
  Estimate W;    // per-capita experience-utility welfare, W_A + W_B
  PairCounts counts;
  std::uint64_t high_risk_agents = 0;
  std::uint64_t low_risk_tests = 0;       // must stay 0
  std::uint64_t untested_rejections = 0;  // must stay 0
};

namespace detail {

inline constexpr std::uint64_t kPairsPerBlock = 4096;

struct BlockStats {
  std::uint64_t pairs = 0;
  PairCounts counts;
  std::uint64_t pairs_with_tests[3] = {0, 0, 0};
  std::uint64_t high_agents = 0;
  std::uint64_t high_tested = 0;
  std::uint64_t discriminators = 0;
  std::uint64_t low_risk_tests = 0;
  std::uint64_t untested_rejections = 0;
  // Welford accumulators of the per-pair welfare average.
  double w_mean = 0.0;
  double w_m2 = 0.0;
};

inline std::mt19937_64 block_stream(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block),
                    static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

struct SimContext {
  const ModelParams& p;
  Convention convention;
  double S;
  double beta_star;
  bool all_unsafe;
};

inline BlockStats simulate_block(const SimContext& ctx, std::uint64_t seed,
                                 std::uint64_t block, std::uint64_t pairs) {
  const ModelParams& p = ctx.p;
  std::mt19937_64 rng = block_stream(seed, block);
  BlockStats st;
  st.pairs = pairs;
  for (std::uint64_t i = 0; i < pairs; ++i) {
    const double beta[2] = {p.dist_beta.sample(rng), p.dist_beta.sample(rng)};
    const bool hot[2] = {ctx.all_unsafe || beta[0] < ctx.beta_star,
                         ctx.all_unsafe || beta[1] < ctx.beta_star};
    const bool unsafe =
        ctx.all_unsafe ||
        pair_outcome(beta[0], beta[1], ctx.beta_star) == PairOutcome::kUnsafe;
    if (hot[0] && hot[1]) {
      ++st.counts.hot_hot;
    } else if (!hot[0] && !hot[1]) {
      ++st.counts.cold_cold;
    } else if (unsafe) {
      ++st.counts.hot_cold_unsafe;
    } else {
      ++st.counts.hot_cold_safe;
    }

    const double theta = unsafe ? p.theta_H : p.theta_L;
    const double period1 = unsafe ? p.M : p.M - p.u;
    int tests = 0;
    double pair_total = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double y_a = p.dist_y.sample(rng);
      const double y_b = p.dist_y.sample(rng);
      const bool tested = best_response_test(theta, y_a, ctx.S, p);
      const bool accepts = best_response_interact(tested, y_b, p);
      const bool discriminator = !best_response_interact(true, y_b, p);

      tests += tested ? 1 : 0;
      if (unsafe) {
        ++st.high_agents;
        st.high_tested += tested ? 1 : 0;
      } else if (tested) {
        ++st.low_risk_tests;
      }
      if (!tested && !accepts) ++st.untested_rejections;
      st.discriminators += discriminator ? 1 : 0;

      const double agent = period1 - theta * p.c_h +
                           (tested ? theta * p.v - p.c : 0.0) +
                           (accepts ? y_a : 0.0);
      double partner = accepts ? y_b : 0.0;
      if (discriminator && ctx.convention == Convention::kPaperLiteral) {
        partner = tested ? y_b : 0.0;
      }
      pair_total += agent + partner;
    }
    ++st.pairs_with_tests[tests];

    const double w = 0.5 * pair_total;
    const double n = static_cast<double>(i + 1);
    const double delta = w - st.w_mean;
    st.w_mean += delta / n;
    st.w_m2 += delta * (w - st.w_mean);
  }
  return st;
}

inline double binomial_se(double p, double n) {
  return n > 0.0 ? std::sqrt(std::max(0.0, p * (1.0 - p)) / n) : 0.0;
}

}  // namespace detail

inline SimResult simulate(const ModelParams& params, const SimConfig& cfg) {
  if (cfg.n_pairs == 0) throw InvalidArgument("n_pairs: must be >= 1");
  const ModelParams p = params.with_tau_hat(cfg.tau_hat);
  require_welfare_assumptions(p);

  // beta* is the only analytic input: the cheap-talk stage has no
  // operational protocol to simulate.
  const double S = stigma_level(p);
  const Period1Outcome p1 = period1_outcome(p, continuation_values(p, S).gap);
  const detail::SimContext ctx{p, cfg.convention, S, p1.beta_star,
                               p1.regime == Regime::kAllUnsafe};

  const std::uint64_t n_blocks =
      (cfg.n_pairs + detail::kPairsPerBlock - 1) / detail::kPairsPerBlock;
  std::vector<detail::BlockStats> blocks(n_blocks);
  auto run_block = [&](std::uint64_t b) {
    const std::uint64_t first = b * detail::kPairsPerBlock;
    const std::uint64_t pairs =
        std::min(detail::kPairsPerBlock, cfg.n_pairs - first);
    blocks[b] = detail::simulate_block(ctx, cfg.seed, b, pairs);
  };

  unsigned threads = cfg.threads ? cfg.threads
                                 : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, n_blocks));
  if (threads <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::uint64_t b = next++; b < n_blocks; b = next++) run_block(b);
      });
    }
  }

  // Ordered reduction keeps the result independent of the thread count.
  SimResult res;
  res.n_pairs = cfg.n_pairs;
  std::uint64_t with_tests[3] = {0, 0, 0};
  std::uint64_t high_tested = 0;
  std::uint64_t discriminators = 0;
  double w_n = 0.0;
  double w_mean = 0.0;
  double w_m2 = 0.0;
  for (const detail::BlockStats& b : blocks) {
    res.counts.hot_hot += b.counts.hot_hot;
    res.counts.cold_cold += b.counts.cold_cold;
    res.counts.hot_cold_unsafe += b.counts.hot_cold_unsafe;
    res.counts.hot_cold_safe += b.counts.hot_cold_safe;
    for (int k = 0; k < 3; ++k) with_tests[k] += b.pairs_with_tests[k];
    res.high_risk_agents += b.high_agents;
    high_tested += b.high_tested;
    discriminators += b.discriminators;
    res.low_risk_tests += b.low_risk_tests;
    res.untested_rejections += b.untested_rejections;

    const double nb = static_cast<double>(b.pairs);
    const double total = w_n + nb;
    const double delta = b.w_mean - w_mean;
    w_mean += delta * nb / total;
    w_m2 += b.w_m2 + delta * delta * w_n * nb / total;
    w_n = total;
  }

  const double n = static_cast<double>(cfg.n_pairs);
  const std::uint64_t unsafe_pairs =
      res.counts.hot_hot + res.counts.hot_cold_unsafe;
  res.r.value = static_cast<double>(unsafe_pairs) / n;
  res.r.se = detail::binomial_se(res.r.value, n);

  const double c1 = static_cast<double>(with_tests[1]);
  const double c2 = static_cast<double>(with_tests[2]);
  res.R.value = (0.5 * c1 + c2) / n;
  const double second_moment = (0.25 * c1 + c2) / n;
  const double var_R =
      n > 1.0 ? (second_moment - res.R.value * res.R.value) * n / (n - 1.0)
              : 0.0;
  res.R.se = std::sqrt(std::max(0.0, var_R) / n);

  const double n_high = static_cast<double>(res.high_risk_agents);
  res.R_H.value = n_high > 0.0 ? static_cast<double>(high_tested) / n_high : 0.0;
  res.R_H.se = detail::binomial_se(res.R_H.value, n_high);

  res.S.value = static_cast<double>(discriminators) / (2.0 * n);
  res.S.se = detail::binomial_se(res.S.value, 2.0 * n);

  res.W.value = w_mean;
  res.W.se = n > 1.0 ? std::sqrt(w_m2 / (n - 1.0) / n) : 0.0;
  return res;
}

// Analytic values the simulation should reproduce.
struct AnalyticTargets {
  double S = 0.0;
  double r = 0.0;
  double R_H = 0.0;
  double R = 0.0;
  double W = 0.0;
};

inline AnalyticTargets analytic_targets(const ModelParams& params,
                                        double tau_hat, Convention convention) {
  const WelfareReport rep = welfare(params, tau_hat, convention);
  return {rep.state.period2.S, rep.state.period1.r, rep.state.period2.R_H,
          rep.state.period2.R, rep.W};
}

struct ConvergenceRow {
  std::uint64_t n_pairs = 0;
  SimResult sim;
  AnalyticTargets target;
  double gap_r = 0.0;  // |estimate - target|
  double gap_R = 0.0;
  double gap_R_H = 0.0;
  double gap_W = 0.0;
};

inline std::vector<ConvergenceRow> convergence_report(
    const ModelParams& params, const SimConfig& cfg,
    const std::vector<std::uint64_t>& batch_sizes) {
  for (std::size_t i = 1; i < batch_sizes.size(); ++i) {
    if (batch_sizes[i] <= batch_sizes[i - 1]) {
      throw InvalidArgument("batch sizes must be increasing");
    }
  }
  const AnalyticTargets target =
      analytic_targets(params, cfg.tau_hat, cfg.convention);
  std::vector<ConvergenceRow> rows;
  for (std::uint64_t n : batch_sizes) {
    SimConfig c = cfg;
    c.n_pairs = n;
    ConvergenceRow row;
    row.n_pairs = n;
    row.sim = simulate(params, c);
    row.target = target;
    row.gap_r = std::abs(row.sim.r.value - target.r);
    row.gap_R = std::abs(row.sim.R.value - target.R);
    row.gap_R_H = std::abs(row.sim.R_H.value - target.R_H);
    row.gap_W = std::abs(row.sim.W.value - target.W);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace stigma

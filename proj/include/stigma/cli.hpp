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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stigma/assumptions.hpp"
#include "stigma/config.hpp"
#include "stigma/montecarlo.hpp"
#include "stigma/output.hpp"
#include "stigma/welfare.hpp"

// Command dispatch for the stigma CLI. Exit codes:
//   0 success, 2 configuration error, 3 assumption failure,
//   4 numerical failure (quadrature or optimizer).
namespace stigma::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kAssumptionError = 3,
  kNumericalError = 4,
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> kCommands = {
      "check", "evaluate", "sweep", "optimize", "simulate", "figures"};
  return kCommands;
}

struct Options {
  std::filesystem::path config;
  std::optional<double> tau;
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<std::uint64_t> pairs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> convention;
  bool strict = false;
  bool svg = false;
  std::optional<std::filesystem::path> out_dir;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write " + path.string());
  out << content;
  if (!out) throw OutputError("failed writing " + path.string());
}

inline std::string params_banner(const RunConfig& cfg) {
  const ModelParams& p = cfg.params;
  std::string s = "# theta_L=" + fmt(p.theta_L) + " theta_H=" + fmt(p.theta_H) +
                  " v=" + fmt(p.v) + " c=" + fmt(p.c) + " c_h=" + fmt(p.c_h) +
                  " z=" + fmt(p.z) + " u=" + fmt(p.u) + " M=" + fmt(p.M) +
                  (cfg.M_defaulted ? " (default)" : "") +
                  " tau_hat=" + fmt(p.tau_hat) + " tau_true=" + fmt(p.tau_true) +
                  " dist_beta=" + p.dist_beta.describe() +
                  " dist_y=" + p.dist_y.describe() +
                  " convention=" + to_string(cfg.convention);
  return s;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return xs;
}

inline std::string join_row(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ',';
    out += fmt(v);
  }
  return out + "\n";
}

}  // namespace detail

inline int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const AssumptionReport rep = check_assumptions(cfg.params);
  const ModelParams& p = cfg.params;
  out << "A1 testing participation: " << (rep.a1 ? "holds" : "VIOLATED")
      << " (" << fmt(p.theta_L * p.v) << " < " << fmt(p.c) << " < "
      << fmt(p.theta_H * p.v) << ")\n";
  out << "A2 interaction participation: "
      << (rep.a2 ? "holds" : "violated (reported, not fatal)")
      << " violating_mass=" << fmt(rep.a2_violating_mass)
      << " h_bar=" << fmt(rep.h_bar) << " r=" << fmt(rep.r) << "\n";
  out << "A3 utility gap: " << (rep.a3 ? "holds" : "VIOLATED") << " (c_h="
      << fmt(p.c_h) << " > " << fmt(rep.a3_threshold)
      << ", margin=" << fmt(rep.a3_margin) << ")\n";
  return kOk;
}

inline int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  const SweepRow row =
      evaluate_row(cfg.params, cfg.params.tau_hat, cfg.convention);
  out << kSweepHeader << "\n" << csv_row(row) << "\n";
  return kOk;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto rows = sweep(cfg.params, uniform_grid(cfg.grid), cfg.convention);
  const auto path = cfg.out_dir / "sweep.csv";
  detail::write_file(path, sweep_csv(rows));
  out << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
  return kOk;
}

inline int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
  const OptimizeResult res =
      optimize(cfg.params, cfg.tol, cfg.convention, cfg.grid);
  std::string trace = "phase,tau_hat,W\n";
  for (const TracePoint& t : res.trace) {
    trace += t.phase + "," + fmt(t.tau_hat) + "," + fmt(t.W) + "\n";
  }
  const auto path = cfg.out_dir / "optimize_trace.csv";
  detail::write_file(path, trace);
  out << "tau_star=" << fmt(res.tau_star) << " W_star=" << fmt(res.W_star)
      << "\n";
  out << "wrote " << path.string() << "\n";
  return kOk;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  SimConfig sc;
  sc.n_pairs = cfg.pairs;
  sc.seed = cfg.seed;
  sc.tau_hat = cfg.params.tau_hat;
  sc.convention = cfg.convention;
  const SimResult sim = simulate(cfg.params, sc);
  const AnalyticTargets target =
      analytic_targets(cfg.params, sc.tau_hat, sc.convention);

  std::string csv =
      "tau_hat,n_pairs,seed,S_hat,S_se,S,r_hat,r_se,r,R_H_hat,R_H_se,R_H,"
      "R_hat,R_se,R,W_hat,W_se,W\n";
  csv += fmt(sc.tau_hat) + "," + std::to_string(sc.n_pairs) + "," +
         std::to_string(sc.seed) + ",";
  csv += detail::join_row({sim.S.value, sim.S.se, target.S, sim.r.value,
                           sim.r.se, target.r, sim.R_H.value, sim.R_H.se,
                           target.R_H, sim.R.value, sim.R.se, target.R,
                           sim.W.value, sim.W.se, target.W});
  const auto path = cfg.out_dir / "sim.csv";
  detail::write_file(path, csv);

  auto line = [&](const char* name, const Estimate& e, double t) {
    out << name << ": simulated " << fmt(e.value) << " +/- " << fmt(e.se)
        << "  analytic " << fmt(t) << "\n";
  };
  line("S  ", sim.S, target.S);
  line("r  ", sim.r, target.r);
  line("R_H", sim.R_H, target.R_H);
  line("R  ", sim.R, target.R);
  line("W  ", sim.W, target.W);
  out << "wrote " << path.string() << "\n";
  return kOk;
}

inline int cmd_figures(const RunConfig& cfg, std::ostream& out) {
  const ModelParams& p = cfg.params;
  const auto& dir = cfg.out_dir;
  const int n = std::max(cfg.grid, 2);
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    detail::write_file(dir / name, content);
    written.push_back(name);
  };

  // fig1, fig2: period-2 payoffs by valuation.
  const std::vector<double> ys =
      detail::linspace(p.dist_y.support_lo(), p.dist_y.support_hi(), n);
  const std::vector<double> fig2_stigma = {0.0, 0.25, 0.5, 1.0};
  std::vector<double> v_low, v_high;
  std::vector<std::vector<double>> v_high_by_s(fig2_stigma.size());
  std::string fig1 = "y,V_L,V_H\n";
  std::string fig2 = "y,V_L,V_H_S0,V_H_S0.25,V_H_S0.5,V_H_S1\n";
  for (double y : ys) {
    const double vl = pointwise_continuation(p, 0.5, y, Risk::kLow);
    const double vh = pointwise_continuation(p, 0.5, y, Risk::kHigh);
    v_low.push_back(vl);
    v_high.push_back(vh);
    fig1 += detail::join_row({y, vl, vh});
    std::vector<double> row = {y, vl};
    for (std::size_t k = 0; k < fig2_stigma.size(); ++k) {
      const double v = pointwise_continuation(p, fig2_stigma[k], y, Risk::kHigh);
      v_high_by_s[k].push_back(v);
      row.push_back(v);
    }
    fig2 += detail::join_row(row);
  }
  emit("fig1.csv", fig1);
  emit("fig2.csv", fig2);

  // fig3: a pair is unsafe iff beta_1 + beta_2 < 2 beta*, so the region
  // boundary is beta_2 = 2 beta* - beta_1.
  auto beta_star_at = [&](double tau) {
    const ModelParams q = p.with_tau_hat(tau);
    return hot_threshold(q.u, continuation_values(q, stigma_level(q)).gap);
  };
  const double bs0 = beta_star_at(0.0);
  const double bs1 = beta_star_at(1.0);
  const std::vector<double> betas = detail::linspace(0.0, 1.0, n);
  std::vector<double> edge0, edge1;
  std::string fig3 = "beta_1,boundary_tau0,boundary_tau1\n";
  for (double b : betas) {
    edge0.push_back(std::clamp(2.0 * bs0 - b, 0.0, 1.0));
    edge1.push_back(std::clamp(2.0 * bs1 - b, 0.0, 1.0));
    fig3 += detail::join_row({b, edge0.back(), edge1.back()});
  }
  emit("fig3.csv", fig3);

  // fig4, fig5: the policy sweep.
  const std::vector<double> grid = uniform_grid(n);
  std::vector<WelfareReport> reports;
  for (double t : grid) reports.push_back(welfare(p, t, cfg.convention));
  std::string fig4 = "tau_hat,S,gap,H,r,R_H,R\n";
  std::vector<double> col_S, col_gap, col_H, col_r, col_RH, col_R;
  for (const WelfareReport& rep : reports) {
    const SweepRow row = sweep_row(rep);
    col_S.push_back(row.S);
    col_gap.push_back(row.gap);
    col_H.push_back(row.H);
    col_r.push_back(row.r);
    col_RH.push_back(row.R_H);
    col_R.push_back(row.R);
    fig4 += detail::join_row(
        {row.tau_hat, row.S, row.gap, row.H, row.r, row.R_H, row.R});
  }
  emit("fig4.csv", fig4);

  auto mean_of = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) /
           static_cast<double>(v.size());
  };
  std::vector<double> high, low, group_b, total;
  for (const WelfareReport& rep : reports) {
    high.push_back(rep.components.welfare_high);
    low.push_back(rep.components.welfare_low);
    group_b.push_back(rep.W_B);
    total.push_back(rep.W);
  }
  const double m_high = mean_of(high), m_low = mean_of(low),
               m_b = mean_of(group_b), m_total = mean_of(total);
  std::vector<double> d_high, d_low, d_b, d_total;
  std::string fig5 = std::string("# convention=") + to_string(cfg.convention) +
                     " M=" + fmt(p.M) + "\n";
  fig5 +=
      "tau_hat,welfare_high,welfare_low,welfare_B,W,welfare_high_demeaned,"
      "welfare_low_demeaned,welfare_B_demeaned,W_demeaned\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    d_high.push_back(high[i] - m_high);
    d_low.push_back(low[i] - m_low);
    d_b.push_back(group_b[i] - m_b);
    d_total.push_back(total[i] - m_total);
    fig5 += detail::join_row({grid[i], high[i], low[i], group_b[i], total[i],
                              d_high[i], d_low[i], d_b[i], d_total[i]});
  }
  emit("fig5.csv", fig5);

  if (cfg.svg) {
    emit("fig1.svg", line_chart_svg("Period-2 payoff by valuation (S=0.5)",
                                    "y", ys,
                                    {{"V_L", v_low}, {"V_H", v_high}}));
    std::vector<Series> fig2_series = {{"V_L", v_low}};
    for (std::size_t k = 0; k < fig2_stigma.size(); ++k) {
      fig2_series.push_back({"V_H S=" + fmt(fig2_stigma[k]), v_high_by_s[k]});
    }
    emit("fig2.svg", line_chart_svg("High-risk payoff as stigma rises", "y",
                                    ys, fig2_series));
    emit("fig3.svg", line_chart_svg("Unsafe-pair boundary in (beta_1, beta_2)",
                                    "beta_1", betas,
                                    {{"tau_hat=0", edge0},
                                     {"tau_hat=1", edge1}}));
    emit("fig4.svg", line_chart_svg("Equilibrium quantities vs tau_hat",
                                    "tau_hat", grid,
                                    {{"S", col_S},
                                     {"gap", col_gap},
                                     {"H", col_H},
                                     {"r", col_r},
                                     {"R_H", col_RH},
                                     {"R", col_R}}));
    emit("fig5.svg", line_chart_svg("Demeaned welfare vs tau_hat", "tau_hat",
                                    grid,
                                    {{"high-risk A", d_high},
                                     {"low-risk A", d_low},
                                     {"B", d_b},
                                     {"total", d_total}}));
  }
  out << "wrote";
  for (const auto& name : written) out << ' ' << (dir / name).string();
  out << "\n";
  return kOk;
}

// Applies command-line overrides to a loaded configuration.
inline RunConfig resolve(const Options& opts) {
  RunConfig cfg = load_config(opts.config);
  if (opts.tau) {
    if (!(*opts.tau >= 0.0 && *opts.tau <= 1.0)) {
      throw ConfigError("--tau", "must lie in [0,1]");
    }
    cfg.params.tau_hat = *opts.tau;
  }
  if (opts.grid) {
    if (*opts.grid < 2) throw ConfigError("--grid", "must be >= 2");
    cfg.grid = *opts.grid;
  }
  if (opts.tol) {
    if (!(*opts.tol > 0.0)) throw ConfigError("--tol", "must be > 0");
    cfg.tol = *opts.tol;
  }
  if (opts.pairs) {
    if (*opts.pairs == 0) throw ConfigError("--pairs", "must be >= 1");
    cfg.pairs = *opts.pairs;
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.convention) {
    if (*opts.convention == "corrected") {
      cfg.convention = Convention::kCorrected;
    } else if (*opts.convention == "paper") {
      cfg.convention = Convention::kPaperLiteral;
    } else {
      throw ConfigError("--convention", "expected paper or corrected");
    }
  }
  cfg.strict = opts.strict;
  cfg.svg = opts.svg;
  if (opts.out_dir) cfg.out_dir = *opts.out_dir;
  return cfg;
}

inline int dispatch(const std::string& command, const RunConfig& cfg,
                    std::ostream& out) {
  if (command == "check") return cmd_check(cfg, out);
  if (command == "evaluate") return cmd_evaluate(cfg, out);
  if (command == "sweep") return cmd_sweep(cfg, out);
  if (command == "optimize") return cmd_optimize(cfg, out);
  if (command == "simulate") return cmd_simulate(cfg, out);
  if (command == "figures") return cmd_figures(cfg, out);
  throw ConfigError("command", "unknown command '" + command + "'");
}

// Loads the configuration, enforces strict mode and runs one command,
// mapping failures onto exit codes with diagnostics on err.
inline int run(const std::string& command, const Options& opts,
               std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = resolve(opts);
    if (cfg.strict) {
      const AssumptionReport rep = check_assumptions(cfg.params);
      if (!rep.a3) {
        err << "error: assumption 3 violated: c_h=" << fmt(cfg.params.c_h)
            << " must exceed " << fmt(rep.a3_threshold) << "\n";
        return kAssumptionError;
      }
    }
    if (!cfg.out_dir.empty() && command != "check" && command != "evaluate") {
      std::error_code ec;
      std::filesystem::create_directories(cfg.out_dir, ec);
      if (ec) throw OutputError("cannot create " + cfg.out_dir.string());
    }
    out << detail::params_banner(cfg) << "\n";
    return dispatch(command, cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const OutputError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const AssumptionViolation& e) {
    err << "error: " << e.what() << "\n";
    return e.assumption() == 1 ? kConfigError : kAssumptionError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace stigma::cli

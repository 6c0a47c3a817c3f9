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

// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracle.hpp"
#include "stigma/assumptions.hpp"
#include "stigma/config.hpp"
#include "stigma/coordination.hpp"
#include "stigma/montecarlo.hpp"
#include "stigma/welfare.hpp"

namespace {

using namespace stigma;
namespace fs = std::filesystem;

struct Verdict {
  bool pass = true;
  std::string detail;
};

void fail(Verdict& v, const std::string& why) {
  if (v.pass) v.detail = why;
  v.pass = false;
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

ModelParams paper_params() { return load_config(STIGMA_PAPER_CFG).params; }

Verdict parameter_fidelity() {
  Verdict v;
  const ModelParams p = paper_params();
  const AssumptionReport rep = check_assumptions(p);
  const double expected = (0.8 * 1.0 - 0.55) / (0.8 - 0.2);
  if (!rep.a1 || !rep.a3) fail(v, "assumption checks do not hold");
  if (std::abs(rep.a3_threshold - expected) > 1e-12 || p.c_h != 1.0) {
    fail(v, "threshold " + num(rep.a3_threshold));
  }
  double worst = 0.0;
  for (const SweepRow& row : sweep(p, uniform_grid(101))) {
    worst = std::max(worst, std::abs(row.S - row.tau_hat));
  }
  if (worst > 1e-12) fail(v, "max |S - tau_hat| = " + num(worst));
  if (v.pass) {
    v.detail = "c_h=1 > " + num(rep.a3_threshold) +
               ", max |S - tau_hat| = " + num(worst);
  }
  return v;
}

Verdict monotonicity() {
  Verdict v;
  std::mt19937_64 rng(2718);
  const std::vector<double> grid = uniform_grid(21);
  const double slack = 1e-10;
  int violations = 0;
  for (int set = 0; set < 200; ++set) {
    const ModelParams p = testing::random_valid_params(rng);
    const auto rows = sweep(p, grid);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const SweepRow& a = rows[i - 1];
      const SweepRow& b = rows[i];
      if (b.S < a.S - slack) ++violations;
      if (b.R_H > a.R_H + slack) ++violations;
      if (b.gap < a.gap - slack) ++violations;
      if (b.r > a.r + slack) ++violations;
    }
  }
  if (violations > 0) fail(v, std::to_string(violations) + " violations");
  if (v.pass) v.detail = "200 parameter sets, 21-point grids, 0 violations";
  return v;
}

Verdict closed_form_vs_quadrature() {
  Verdict v;
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> draw(1e-6, 0.5);
  const Distribution beta = Distribution::uniform(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double b = draw(rng);
    const double generic = high_risk_fraction(beta, b, 1e-12);
    worst = std::max(worst, std::abs(generic - 2.0 * b * b));
  }
  if (worst > 1e-8) fail(v, "max deviation " + num(worst));
  if (v.pass) v.detail = "100 draws, max |r - 2 beta*^2| = " + num(worst);
  return v;
}

Verdict monte_carlo_agreement() {
  Verdict v;
  const ModelParams p = paper_params();
  double worst = 0.0;
  for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    SimConfig cfg;
    cfg.n_pairs = 500000;
    cfg.seed = 1;
    cfg.tau_hat = tau;
    const SimResult sim = simulate(p, cfg);
    const AnalyticTargets t = analytic_targets(p, tau, Convention::kCorrected);
    const struct {
      const char* name;
      Estimate est;
      double target;
    } checks[] = {{"r", sim.r, t.r},
                  {"R", sim.R, t.R},
                  {"R_H", sim.R_H, t.R_H},
                  {"W", sim.W, t.W}};
    for (const auto& c : checks) {
      const double dev = std::abs(c.est.value - c.target);
      if (c.est.se == 0.0) {
        if (dev > 1e-12) fail(v, std::string(c.name) + " at tau=" + num(tau));
        continue;
      }
      const double z = dev / c.est.se;
      worst = std::max(worst, z);
      if (z > 3.0) {
        fail(v, std::string(c.name) + " at tau=" + num(tau) + " is " +
                    num(z) + " se off");
      }
    }
  }
  const double r_half = welfare(p, 0.5).state.period1.r;
  if (std::abs(r_half - 0.061828) > 1e-6) {
    fail(v, "r(0.5) = " + num(r_half));
  }
  if (v.pass) {
    v.detail = "5 tau values x 4 statistics, worst |z| = " + num(worst) +
               ", r(0.5) = " + num(r_half);
  }
  return v;
}

Verdict figure_shape() {
  Verdict v;
  const ModelParams p = paper_params();
  const double w0 = welfare(p, 0.0).W;
  const double w1 = welfare(p, 1.0).W;
  const OptimizeResult opt = optimize(p, 1e-8, Convention::kCorrected);
  if (!(w1 > w0)) fail(v, "W(1) <= W(0)");
  if (opt.tau_star < 0.25 || opt.tau_star > 0.5) {
    fail(v, "tau_star = " + num(opt.tau_star));
  }
  if (!(opt.W_star > std::max(w0, w1))) fail(v, "no interior maximum");

  // The literal reading of the discriminator payoff must break the shape.
  const double l0 = welfare(p, 0.0, Convention::kPaperLiteral).W;
  const double l1 = welfare(p, 1.0, Convention::kPaperLiteral).W;
  const OptimizeResult lit = optimize(p, 1e-8, Convention::kPaperLiteral);
  const bool literal_holds = l1 > l0 && lit.tau_star >= 0.25 &&
                             lit.tau_star <= 0.5 &&
                             lit.W_star > std::max(l0, l1);
  if (literal_holds) fail(v, "paper_literal convention unexpectedly passes");
  if (v.pass) {
    v.detail = "corrected: W(0)=" + num(w0) + " W(1)=" + num(w1) +
               " tau_star=" + num(opt.tau_star) + " W*=" + num(opt.W_star) +
               "; paper_literal fails as expected: W(0)=" + num(l0) +
               " W(1)=" + num(l1) + " tau_star=" + num(lit.tau_star);
  }
  return v;
}

Verdict limits_and_kinks() {
  Verdict v;
  const ModelParams p = paper_params();
  for (double tau : {0.0, 1e-300, 1e-12}) {
    const WelfareReport rep = welfare(p, tau);
    const Period2Outcome& o = rep.state.period2;
    if (o.R_H != 1.0 || o.R != rep.state.period1.r || !std::isfinite(rep.W)) {
      fail(v, "S -> 0 limit at tau=" + num(tau));
    }
  }
  int checked = 0;
  for (int i = 0; i <= 1000; ++i) {
    const double tau = 0.125 * i / 1000.0;
    ++checked;
    if (welfare(p, tau).state.period2.R_H != 1.0) {
      fail(v, "R_H < 1 at tau=" + num(tau));
    }
  }
  if (!(welfare(p, 0.126).state.period2.R_H < 1.0)) {
    fail(v, "R_H does not drop past the kink");
  }
  if (v.pass) {
    v.detail = "S=0 limit finite, R_H=1 exactly on " +
               std::to_string(checked) + " points in [0, 0.125]";
  }
  return v;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "stigma_acceptance";
  fs::remove_all(root);
  std::vector<std::string> outputs;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    for (const char* cmd : {"simulate", "sweep"}) {
      const std::string line = std::string(STIGMA_CLI_PATH) + " " + cmd +
                               " --config " + STIGMA_PAPER_CFG + " --out " +
                               dir.string() + " > /dev/null";
      const int raw = std::system(line.c_str());
      if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) {
        fail(v, std::string(cmd) + " exited abnormally");
      }
    }
    outputs.push_back(slurp(dir / "sim.csv"));
    outputs.push_back(slurp(dir / "sweep.csv"));
  }
  if (outputs[0].empty() || outputs[1].empty()) fail(v, "missing output");
  if (outputs[0] != outputs[2]) fail(v, "sim.csv differs between runs");
  if (outputs[1] != outputs[3]) fail(v, "sweep.csv differs between runs");
  if (v.pass) {
    v.detail = "sim.csv (" + std::to_string(outputs[0].size()) +
               " bytes) and sweep.csv (" + std::to_string(outputs[1].size()) +
               " bytes) identical across runs";
  }
  return v;
}

Verdict present_bias() {
  Verdict v;
  const ModelParams p = paper_params();
  const PresentBiasLoss loss = present_bias_loss(p);
  const oracle::UniformModel m;
  const oracle::Chain o = oracle::chain(m, 0.0);
  const double closed_loss = o.r * o.gap;
  const double closed_diff = o.r * (o.gap - m.u);
  const double bench = first_best_benchmark(p).W - welfare(p, 0.0).W;
  if (std::abs(loss.period2_loss - closed_loss) > 1e-9) {
    fail(v, "period-2 loss " + num(loss.period2_loss));
  }
  if (std::abs(loss.benchmark_difference - closed_diff) > 1e-9 ||
      std::abs(bench - closed_diff) > 1e-9) {
    fail(v, "benchmark difference " + num(loss.benchmark_difference));
  }
  // Rounded hand values: 0.163265 * 0.35 and 0.163265 * 0.25.
  if (std::abs(loss.period2_loss - 0.057143) > 1e-6 ||
      std::abs(loss.benchmark_difference - 0.040816) > 1e-6) {
    fail(v, "rounded values do not match");
  }
  if (v.pass) {
    v.detail = "dW = r(0)*gap(0) = " + num(loss.period2_loss) +
               ", benchmark difference r(0)*(gap(0)-u) = " +
               num(loss.benchmark_difference);
  }
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 parameter fidelity", parameter_fidelity},
      {"2 monotonicity", monotonicity},
      {"3 closed form vs quadrature", closed_form_vs_quadrature},
      {"4 Monte Carlo agreement", monte_carlo_agreement},
      {"5 welfare shape", figure_shape},
      {"6 limits and kinks", limits_and_kinks},
      {"7 determinism", determinism},
      {"8 present-bias loss", present_bias},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (!v.pass) ++failures;
    std::printf("%s  criterion %s (%.2fs): %s\n", v.pass ? "PASS" : "FAIL",
                c.name, secs, v.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

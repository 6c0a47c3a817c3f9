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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stigma/cli.hpp"

namespace stigma {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("stigma_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path path = dir / "model.cfg";
  std::ofstream(path) << body;
  return path;
}

const char* kBaseConfig =
    "theta_L = 0.2\n"
    "theta_H = 0.8\n"
    "v = 1\n"
    "c = 0.55\n"
    "c_h = 1\n"
    "u = 0.1\n"
    "z = 2.5\n"
    "tau_hat = 0.5   # perceived risk\n"
    "dist_beta = uniform(0,1)\n"
    "dist_y = uniform(0,2)\n";

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::string& command, cli::Options opts) {
  std::ostringstream out, err;
  const int code = cli::run(command, opts, out, err);
  return {code, out.str(), err.str()};
}

cli::Options paper_options(const fs::path& out_dir) {
  cli::Options opts;
  opts.config = STIGMA_PAPER_CFG;
  opts.out_dir = out_dir;
  return opts;
}

TEST(LoadConfig, BundledReferenceConfig) {
  const RunConfig cfg = load_config(STIGMA_PAPER_CFG);
  const ModelParams& p = cfg.params;
  EXPECT_EQ(p.theta_L, 0.2);
  EXPECT_EQ(p.theta_H, 0.8);
  EXPECT_EQ(p.v, 1.0);
  EXPECT_EQ(p.c, 0.55);
  EXPECT_EQ(p.c_h, 1.0);
  EXPECT_EQ(p.u, 0.1);
  EXPECT_EQ(p.z, 2.5);
  EXPECT_EQ(p.M, 1.0);
  EXPECT_TRUE(cfg.M_defaulted);
  EXPECT_EQ(p.tau_true, 0.0);
  EXPECT_EQ(cfg.convention, Convention::kCorrected);
  EXPECT_EQ(p.dist_y.describe(), "uniform(0,2)");
  const AssumptionReport rep = check_assumptions(p);
  EXPECT_TRUE(rep.a1);
  EXPECT_TRUE(rep.a3);
}

TEST(LoadConfig, DefaultMIsEchoed) {
  const CliRun r = run("check", paper_options(scratch("echo")));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("M=1 (default)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("A3 utility gap: holds"), std::string::npos);
}

TEST(LoadConfig, ErrorsNameTheKey) {
  struct Case {
    std::string body;
    std::string key;
  };
  std::string base = kBaseConfig;
  auto replace = [&](const std::string& from, const std::string& to) {
    std::string s = base;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  const std::vector<Case> cases = {
      {replace("c = 0.55", "c = 0.1"), "c"},
      {replace("z = 2.5\n", ""), "z"},
      {base + "lambda = 3\n", "lambda"},
      {replace("v = 1", "v = one"), "v"},
      {replace("theta_H = 0.8", "theta_H = 1.5"), "theta_H"},
      {replace("dist_y = uniform(0,2)", "dist_y = normal(0,1)"), "dist_y"},
      {replace("dist_y = uniform(0,2)", "dist_y = uniform(2,0)"), "dist_y"},
      {base + "u = 0.2\n", "u"},
      {base + "convention = maybe\n", "convention"},
      {base + "garbage line\n", "line 11"},
  };
  const fs::path dir = scratch("errors");
  for (const Case& c : cases) {
    cli::Options opts;
    opts.config = write_config(dir, c.body);
    const CliRun r = run("check", opts);
    EXPECT_EQ(r.code, cli::kConfigError) << c.key;
    EXPECT_NE(r.err.find(c.key), std::string::npos) << r.err;
  }
  cli::Options missing;
  missing.config = dir / "does_not_exist.cfg";
  EXPECT_EQ(run("check", missing).code, cli::kConfigError);
}

TEST(LoadConfig, OptionalKeysAndPiecewise) {
  const fs::path dir = scratch("piecewise");
  std::ofstream(dir / "beta.csv") << "x,p\n0,0\n0.5,0.7\n1,1\n";
  std::string body = kBaseConfig;
  body.replace(body.find("uniform(0,1)"), 12, "piecewise:beta.csv");
  body += "M = 3\nconvention = paper\n";
  const RunConfig cfg = load_config(write_config(dir, body));
  EXPECT_EQ(cfg.params.M, 3.0);
  EXPECT_FALSE(cfg.M_defaulted);
  EXPECT_EQ(cfg.convention, Convention::kPaperLiteral);
  EXPECT_EQ(cfg.params.dist_beta.kind(), Distribution::Kind::kPiecewiseLinearCdf);
  EXPECT_DOUBLE_EQ(cfg.params.dist_beta.cdf(0.25), 0.35);
}

TEST(CliRun, StrictUtilityGapFailure) {
  const fs::path dir = scratch("strict");
  std::string body = kBaseConfig;
  body.replace(body.find("c_h = 1"), 7, "c_h = 0.3");
  cli::Options opts;
  opts.config = write_config(dir, body);
  opts.out_dir = dir;
  EXPECT_EQ(run("check", opts).code, cli::kOk);
  EXPECT_EQ(run("evaluate", opts).code, cli::kAssumptionError);
  opts.strict = true;
  const CliRun r = run("check", opts);
  EXPECT_EQ(r.code, cli::kAssumptionError);
  EXPECT_NE(r.err.find("assumption 3"), std::string::npos);
}

TEST(CliRun, InvalidOverrides) {
  cli::Options opts = paper_options(scratch("overrides"));
  opts.tau = 1.5;
  EXPECT_EQ(run("evaluate", opts).code, cli::kConfigError);
  opts.tau.reset();
  opts.grid = 1;
  EXPECT_EQ(run("sweep", opts).code, cli::kConfigError);
  opts.grid.reset();
  opts.convention = "literal";
  EXPECT_EQ(run("sweep", opts).code, cli::kConfigError);
  EXPECT_EQ(run("explode", paper_options(scratch("overrides"))).code,
            cli::kConfigError);
}

TEST(CliRun, SweepStigmaEqualsPerceivedRisk) {
  const fs::path dir = scratch("sweep");
  cli::Options opts = paper_options(dir);
  opts.grid = 101;
  ASSERT_EQ(run("sweep", opts).code, 0);
  const std::string text = slurp(dir / "sweep.csv");
  EXPECT_EQ(text.rfind("tau_hat,S,gap,H,r,R_H,R,W_A,W_B,W\n", 0), 0u);
  const auto rows = read_csv(dir / "sweep.csv");
  ASSERT_EQ(rows.size(), 101u);
  for (const auto& row : rows) EXPECT_NEAR(row[1], row[0], 1e-12);
}

TEST(CliRun, EvaluateReproducesSweepRows) {
  const fs::path dir = scratch("roundtrip");
  cli::Options opts = paper_options(dir);
  opts.grid = 21;
  ASSERT_EQ(run("sweep", opts).code, 0);
  std::ifstream in(dir / "sweep.csv");
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    cli::Options one = paper_options(dir);
    one.tau = std::stod(line.substr(0, line.find(',')));
    const CliRun r = run("evaluate", one);
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\n" + line + "\n"), std::string::npos) << line;
  }
}

TEST(CliRun, OptimizeReportsTippingPoint) {
  const fs::path dir = scratch("optimize");
  const CliRun r = run("optimize", paper_options(dir));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pos = r.out.find("tau_star=");
  ASSERT_NE(pos, std::string::npos);
  const double tau_star = std::stod(r.out.substr(pos + 9));
  EXPECT_GE(tau_star, 0.25);
  EXPECT_LE(tau_star, 0.50);
  EXPECT_TRUE(fs::exists(dir / "optimize_trace.csv"));
}

TEST(CliRun, SimulateWritesTargetsSideBySide) {
  const fs::path dir = scratch("simulate");
  cli::Options opts = paper_options(dir);
  opts.pairs = 20000;
  opts.seed = 9;
  ASSERT_EQ(run("simulate", opts).code, 0);
  const std::string first = slurp(dir / "sim.csv");
  EXPECT_EQ(first.rfind("tau_hat,n_pairs,seed,S_hat,S_se,S,r_hat", 0), 0u);
  const auto rows = read_csv(dir / "sim.csv");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][1], 20000.0);
  ASSERT_EQ(run("simulate", opts).code, 0);
  EXPECT_EQ(slurp(dir / "sim.csv"), first);
}

TEST(CliRun, FiguresAreDeterministicAndFaithful) {
  const fs::path dir = scratch("figures");
  cli::Options opts = paper_options(dir);
  opts.svg = true;
  ASSERT_EQ(run("figures", opts).code, 0);
  std::vector<std::string> first;
  for (int i = 1; i <= 5; ++i) {
    for (const char* ext : {".csv", ".svg"}) {
      const fs::path f = dir / ("fig" + std::to_string(i) + ext);
      ASSERT_TRUE(fs::exists(f)) << f;
      first.push_back(slurp(f));
    }
  }
  ASSERT_EQ(run("figures", opts).code, 0);
  std::size_t k = 0;
  for (int i = 1; i <= 5; ++i) {
    for (const char* ext : {".csv", ".svg"}) {
      EXPECT_EQ(slurp(dir / ("fig" + std::to_string(i) + ext)), first[k++]);
    }
  }

  EXPECT_EQ(first[8].rfind("# convention=corrected M=1\n", 0), 0u);
  const auto fig5 = read_csv(dir / "fig5.csv");
  EXPECT_GT(fig5.back()[8], fig5.front()[8]);

  const auto fig1 = read_csv(dir / "fig1.csv");
  EXPECT_NEAR(fig1.front()[2], -0.55, 1e-12);
  EXPECT_NEAR(fig1.front()[1], -0.2, 1e-12);
}

TEST(Binary, ExitCodes) {
  const std::string cli = STIGMA_CLI_PATH;
  const fs::path dir = scratch("binary");
  auto status = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " > " + (dir / "log").string() +
                            " 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  const std::string cfg = std::string("--config ") + STIGMA_PAPER_CFG;
  EXPECT_EQ(status("check " + cfg), 0);
  EXPECT_EQ(status("evaluate " + cfg + " --tau 0.3"), 0);
  EXPECT_EQ(status("frobnicate " + cfg), 2);
  EXPECT_EQ(status("check"), 2);
  EXPECT_EQ(status("check " + cfg + " --convention nope"), 2);
  EXPECT_EQ(status("check --config " + (dir / "missing.cfg").string()), 2);
}

}  // namespace
}  // namespace stigma

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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "stigma/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = stigma::cli;
  CLI::App app{"Equilibrium, welfare and simulation tool for the stigma model"};

  std::string command;
  cli::Options opts;
  std::string config;
  double tau = 0.0;
  int grid = 0;
  double tol = 0.0;
  std::uint64_t pairs = 0;
  std::uint64_t seed = 0;
  std::string convention;
  std::string out_dir;

  app.add_option("command", command, "check|evaluate|sweep|optimize|simulate|figures")
      ->required()
      ->check(CLI::IsMember(cli::commands()));
  app.add_option("--config", config, "model configuration file")->required();
  auto* tau_opt = app.add_option("--tau", tau, "perceived transmission risk");
  auto* grid_opt = app.add_option("--grid", grid, "grid points on [0,1]");
  auto* tol_opt = app.add_option("--tol", tol, "optimizer tolerance");
  auto* pairs_opt = app.add_option("--pairs", pairs, "simulated pairs");
  auto* seed_opt = app.add_option("--seed", seed, "simulation seed");
  auto* conv_opt = app.add_option("--convention", convention,
                                  "partner welfare booking")
                       ->check(CLI::IsMember({"paper", "corrected"}));
  app.add_flag("--strict", opts.strict, "fail when assumption 3 is violated");
  app.add_flag("--svg", opts.svg, "also render SVG charts (figures)");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kConfigError;
  }

  opts.config = config;
  if (*tau_opt) opts.tau = tau;
  if (*grid_opt) opts.grid = grid;
  if (*tol_opt) opts.tol = tol;
  if (*pairs_opt) opts.pairs = pairs;
  if (*seed_opt) opts.seed = seed;
  if (*conv_opt) opts.convention = convention;
  if (*out_opt) opts.out_dir = out_dir;
  return cli::run(command, opts, std::cout, std::cerr);
}

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

#include <cmath>
#include <string>

#include "stigma/distributions.hpp"
#include "stigma/errors.hpp"

namespace stigma {

// Exogenous inputs of the two-period game.
struct ModelParams {
  double theta_L = 0.2;  // infection probability, low-risk type
  double theta_H = 0.8;  // infection probability, high-risk type
  double v = 1.0;        // treatment benefit when positive
  double c = 0.55;       // cost of taking a test
  double c_h = 1.0;      // cost of infection
  double z = 2.5;        // health cost to a partner if infected
  double u = 0.1;        // period-1 premium of unsafe over safe coordination
  double M = 1.0;        // period-1 coordination payoff (additive constant)
  double tau_hat = 0.0;  // perceived transmission risk (policy instrument)
  double tau_true = 0.0;
  Distribution dist_beta = Distribution::uniform(0.0, 1.0);
  Distribution dist_y = Distribution::uniform(0.0, 2.0);

  // Net gain from testing for a high-risk agent.
  double high_risk_test_gain() const noexcept { return theta_H * v - c; }

  // Stigma cutoff on partner valuations: y_b below it rejects a tested agent.
  double rejection_cutoff() const noexcept { return tau_hat * theta_H * z; }

  // Range checks plus the testing-participation assumption. Throws
  // InvalidArgument naming the field, or AssumptionViolation(1).
  void validate() const {
    auto require = [](bool ok, const char* field, const char* rule) {
      if (!ok) throw InvalidArgument(std::string(field) + ": " + rule);
    };
    require(theta_L > 0.0 && theta_L < 1.0, "theta_L", "must lie in (0,1)");
    require(theta_H > 0.0 && theta_H < 1.0, "theta_H", "must lie in (0,1)");
    require(theta_L < theta_H, "theta_L", "must be below theta_H");
    require(std::isfinite(v) && v >= 0.0, "v", "must be >= 0");
    require(std::isfinite(c) && c >= 0.0, "c", "must be >= 0");
    require(std::isfinite(c_h) && c_h >= 0.0, "c_h", "must be >= 0");
    require(std::isfinite(z) && z >= 0.0, "z", "must be >= 0");
    require(std::isfinite(u) && u >= 0.0, "u", "must be >= 0");
    require(std::isfinite(M) && M >= 0.0, "M", "must be >= 0");
    require(tau_hat >= 0.0 && tau_hat <= 1.0, "tau_hat", "must lie in [0,1]");
    require(tau_true >= 0.0 && tau_true <= 1.0, "tau_true",
            "must lie in [0,1]");
    if (!(theta_L * v < c && c < theta_H * v)) {
      throw AssumptionViolation(
          1, "c must satisfy theta_L*v < c < theta_H*v");
    }
  }

  ModelParams with_tau_hat(double t) const {
    ModelParams p = *this;
    p.tau_hat = t;
    return p;
  }
};

// The numeric example used throughout the documentation and tests:
// theta_L=0.2, theta_H=0.8, v=1, c=0.55, c_h=1, u=0.1, z=2.5, M=1,
// beta ~ U(0,1), y ~ U(0,2).
inline ModelParams reference_params(double tau_hat = 0.0) {
  ModelParams p;
  p.tau_hat = tau_hat;
  return p;
}

}  // namespace stigma

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

#include <stdexcept>
#include <string>

namespace stigma {

// Invalid model or distribution input. Raised at construction time.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One of the model's standing assumptions does not hold.
class AssumptionViolation : public std::runtime_error {
 public:
  AssumptionViolation(int assumption, const std::string& what)
      : std::runtime_error("assumption " + std::to_string(assumption) +
                           " violated: " + what),
        assumption_(assumption) {}

  int assumption() const noexcept { return assumption_; }

 private:
  int assumption_;
};

// Quadrature or optimizer failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(double estimate, double error_bound)
      : NumericalError("quadrature did not converge (estimate " +
                       std::to_string(estimate) + ", error bound " +
                       std::to_string(error_bound) + ")"),
        estimate_(estimate),
        error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

}  // namespace stigma

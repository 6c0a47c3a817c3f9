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
#include <utility>

#include "stigma/errors.hpp"

namespace stigma {

namespace detail {

struct SimpsonState {
  double error = 0.0;
  bool converged = true;
};

template <class F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth,
                        SimpsonState& state) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h = b - a;
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) {
    state.error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    state.error += std::abs(delta) / 15.0;
    state.converged = false;
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                          state) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1,
                          state);
}

}  // namespace detail

inline constexpr double kDefaultQuadratureTol = 1e-10;
inline constexpr int kDefaultQuadratureDepth = 60;

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
};

// Adaptive Simpson quadrature of f over [a, b] with absolute tolerance tol.
// Throws QuadratureError carrying the best estimate when some subinterval
// still fails the tolerance test at max_depth.
template <class F>
QuadratureResult integrate_with_error(const F& f, double a, double b,
                                      double tol = kDefaultQuadratureTol,
                                      int max_depth = kDefaultQuadratureDepth) {
  if (!(a <= b)) throw InvalidArgument("integrate: requires a <= b");
  if (!(tol > 0.0)) throw InvalidArgument("integrate: requires tol > 0");
  if (a == b) return {};
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  detail::SimpsonState state;
  const double value = detail::adaptive_simpson(f, a, b, fa, fm, fb, whole,
                                                tol, max_depth, state);
  if (!state.converged || !std::isfinite(value)) {
    throw QuadratureError(value, state.error);
  }
  return {value, state.error};
}

template <class F>
double integrate(const F& f, double a, double b,
                 double tol = kDefaultQuadratureTol,
                 int max_depth = kDefaultQuadratureDepth) {
  return integrate_with_error(f, a, b, tol, max_depth).value;
}

}  // namespace stigma

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
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stigma/errors.hpp"
#include "stigma/quadrature.hpp"

namespace stigma {

struct Knot {
  double x;
  double p;
};

// One-dimensional distribution with a piecewise-linear CDF on a bounded
// support [lo, hi). A uniform law is the two-knot special case.
//
// Boundary convention: cdf(lo) = 0 and cdf(hi) = 1. Inverse-CDF sampling maps
// [0, 1) onto [lo, hi).
class Distribution {
 public:
  enum class Kind { kUniform, kPiecewiseLinearCdf };

  static Distribution uniform(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw InvalidArgument("uniform: requires finite lo < hi");
    }
    return Distribution(Kind::kUniform, {{lo, 0.0}, {hi, 1.0}});
  }

  static Distribution piecewise(std::vector<Knot> knots) {
    if (knots.size() < 2) {
      throw InvalidArgument("piecewise cdf: needs at least two knots");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const Knot& k = knots[i];
      if (!std::isfinite(k.x) || !std::isfinite(k.p) || k.p < 0.0 ||
          k.p > 1.0) {
        throw InvalidArgument("piecewise cdf: knot " + std::to_string(i) +
                              " out of range");
      }
      if (i > 0 && !(knots[i - 1].x < k.x)) {
        throw InvalidArgument("piecewise cdf: x must be strictly increasing");
      }
      if (i > 0 && knots[i - 1].p > k.p) {
        throw InvalidArgument("piecewise cdf: p must be non-decreasing");
      }
    }
    if (knots.front().p != 0.0 || knots.back().p != 1.0) {
      throw InvalidArgument("piecewise cdf: first p must be 0 and last p 1");
    }
    return Distribution(Kind::kPiecewiseLinearCdf, std::move(knots));
  }

  Kind kind() const noexcept { return kind_; }
  double support_lo() const noexcept { return knots_.front().x; }
  double support_hi() const noexcept { return knots_.back().x; }
  std::span<const Knot> knots() const noexcept { return knots_; }

  double cdf(double x) const noexcept {
    if (std::isnan(x)) return 0.0;
    if (x <= support_lo()) return 0.0;
    if (x >= support_hi()) return 1.0;
    const std::size_t i = segment_of(x);
    const Knot& a = knots_[i];
    const Knot& b = knots_[i + 1];
    const double p = a.p + (b.p - a.p) * (x - a.x) / (b.x - a.x);
    return std::clamp(p, 0.0, 1.0);
  }

  // Density on the open segment containing x; zero outside the support.
  double density(double x) const noexcept {
    if (!(x > support_lo()) || !(x < support_hi())) return 0.0;
    const std::size_t i = segment_of(x);
    return segment_density(i);
  }

  double mean() const noexcept { return partial_expectation(support_hi()); }

  // E[X 1{X <= t}], exact for the piecewise-linear CDF.
  double partial_expectation(double t) const noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      const Knot& a = knots_[i];
      const Knot& b = knots_[i + 1];
      if (t <= a.x) break;
      const double dp = b.p - a.p;
      if (dp == 0.0) continue;
      if (t >= b.x) {
        sum += dp * 0.5 * (a.x + b.x);
      } else {
        sum += segment_density(i) * 0.5 * (t - a.x) * (t + a.x);
      }
    }
    return sum;
  }

  // Inverse CDF on [0, 1); flat CDF segments are skipped.
  double quantile(double q) const noexcept {
    if (!(q > 0.0)) return support_lo();
    if (q >= 1.0) return support_hi();
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      const Knot& a = knots_[i];
      const Knot& b = knots_[i + 1];
      if (q < b.p) {
        return a.x + (q - a.p) / (b.p - a.p) * (b.x - a.x);
      }
    }
    return support_hi();
  }

  template <class URBG>
  double sample(URBG& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return quantile(unit(rng));
  }

  // Interior points where the density may jump.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < knots_.size(); ++i) {
      out.push_back(knots_[i].x);
    }
    return out;
  }

  std::string describe() const {
    char buf[96];
    if (kind_ == Kind::kUniform) {
      std::snprintf(buf, sizeof buf, "uniform(%.12g,%.12g)", support_lo(),
                    support_hi());
      return buf;
    }
    std::snprintf(buf, sizeof buf, "piecewise[%zu knots on %.12g..%.12g]",
                  knots_.size(), support_lo(), support_hi());
    return buf;
  }

 private:
  Distribution(Kind kind, std::vector<Knot> knots)
      : kind_(kind), knots_(std::move(knots)) {}

  // Index i of the segment [x_i, x_{i+1}) holding x, for lo < x < hi.
  std::size_t segment_of(double x) const noexcept {
    auto it = std::upper_bound(
        knots_.begin(), knots_.end(), x,
        [](double value, const Knot& k) { return value < k.x; });
    return static_cast<std::size_t>(it - knots_.begin()) - 1;
  }

  double segment_density(std::size_t i) const noexcept {
    const Knot& a = knots_[i];
    const Knot& b = knots_[i + 1];
    return (b.p - a.p) / (b.x - a.x);
  }

  Kind kind_;
  std::vector<Knot> knots_;
};

// Lebesgue-Stieltjes integral of g against the distribution over [a, b].
// The range is split at knots and at any caller-supplied kink points so that
// each piece has a constant density and a smooth integrand.
template <class G>
double integrate_against(const Distribution& dist, const G& g, double a,
                         double b, std::span<const double> kinks = {},
                         double tol = kDefaultQuadratureTol) {
  a = std::max(a, dist.support_lo());
  b = std::min(b, dist.support_hi());
  if (!(a < b)) return 0.0;
  std::vector<double> cuts{a, b};
  for (const Knot& k : dist.knots()) {
    if (k.x > a && k.x < b) cuts.push_back(k.x);
  }
  for (double k : kinks) {
    if (k > a && k < b) cuts.push_back(k);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double piece_tol = tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const double dens = dist.density(0.5 * (lo + hi));
    if (dens == 0.0) continue;
    total += dens * integrate([&](double x) { return g(x); }, lo, hi,
                              piece_tol / dens);
  }
  return total;
}

}  // namespace stigma

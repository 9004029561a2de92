// Copyright 2026 The opholder Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * @brief Small numerical kernels: Gauss-Legendre rules, the Riemann zeta
 *        function for real s > 1 and a polynomial smooth bump.
 */

#pragma once

#include "errors.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace opholder::numerics {

struct QuadratureRule {
  std::vector<double> nodes;  ///< on [0, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [0, 1].
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw parameter_error("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = 0.5 * (1.0 - x);
    rule.nodes[hi] = 0.5 * (1.0 + x);
    rule.weights[lo] = rule.weights[hi] = 0.5 * w;
  }
  return rule;
}

/// zeta(s) = sum_{n>=1} n^{-s} for real s > 1: direct sum plus Euler-Maclaurin remainder.
inline double zeta(double s) {
  if (!(s > 1.0)) throw parameter_error("zeta: s must be > 1");
  constexpr int N = 64;
  double sum = 0.0;
  for (int n = N; n >= 1; --n) sum += std::pow(n, -s);
  const double nn = N;
  sum += std::pow(nn, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(nn, -s) + s / 12.0 * std::pow(nn, -s - 1.0) -
         s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(nn, -s - 3.0) +
         s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * std::pow(nn, -s - 5.0);
  return sum;
}

/// Polynomial S on [0, 1] with S(0) = 0, S(1) = 1 and the first K derivatives vanishing at both ends.
class Smoothstep {
 public:
  explicit Smoothstep(int k) : k_(k) {
    if (k < 0) throw parameter_error("Smoothstep: order must be >= 0");
    // S(u) = u^{K+1} sum_{j=0}^{K} C(K+j, j) C(2K+1, K-j) (-u)^j
    coeffs_.assign(static_cast<std::size_t>(2 * k + 2), 0.0);
    for (int j = 0; j <= k; ++j) {
      const double c = binomial(k + j, j) * binomial(2 * k + 1, k - j) * ((j % 2 == 0) ? 1.0 : -1.0);
      coeffs_[static_cast<std::size_t>(k + 1 + j)] = c;
    }
  }

  int order() const noexcept { return k_; }

  /// S^(m)(u) for u in [0, 1], clamped outside.
  double derivative(int m, double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return m == 0 ? 1.0 : 0.0;
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > static_cast<std::size_t>(m);) {
      double c = coeffs_[i];
      for (int r = 0; r < m; ++r) c *= static_cast<double>(i) - r;
      acc = acc * u + c;
    }
    return acc;
  }

 private:
  static double binomial(int n, int r) {
    double b = 1.0;
    for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
  }

  int k_;
  std::vector<double> coeffs_;
};

/// phi = 0 outside (a0, b1), 1 on [a1, b0], smoothstep ramps in between.
class SmoothBump {
 public:
  SmoothBump(double a0, double a1, double b0, double b1, int order = 7)
      : a0_(a0), a1_(a1), b0_(b0), b1_(b1), step_(order) {
    if (!(a0 < a1 && a1 <= b0 && b0 < b1)) throw parameter_error("SmoothBump: need a0 < a1 <= b0 < b1");
  }

  /// Ramps [1/8, 1/4] and [2, pi].
  static SmoothBump standard() { return SmoothBump(0.125, 0.25, 2.0, std::numbers::pi); }

  double derivative(int m, double x) const {
    if (x <= a0_ || x >= b1_) return 0.0;
    if (x < a1_) {
      const double h = a1_ - a0_;
      return std::pow(h, -m) * step_.derivative(m, (x - a0_) / h);
    }
    if (x <= b0_) return m == 0 ? 1.0 : 0.0;
    const double h = b1_ - b0_;
    return std::pow(-1.0 / h, m) * step_.derivative(m, (b1_ - x) / h);
  }

  double operator()(double x) const { return derivative(0, x); }
  int smoothness() const noexcept { return step_.order(); }
  std::pair<double, double> support() const noexcept { return {a0_, b1_}; }
  std::pair<double, double> plateau() const noexcept { return {a1_, b0_}; }

 private:
  double a0_, a1_, b0_, b1_;
  Smoothstep step_;
};

}  // namespace opholder::numerics

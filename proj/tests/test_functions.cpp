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

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace opholder;
using namespace opholder::testing;

namespace {

/// Central finite difference of order k built from f^{(k-1)}.
double fd(const ScalarFunction& f, int k, double x) {
  const double h = 1e-5 * std::max(1.0, std::abs(x));
  return (f.derivative(k - 1, x + h) - f.derivative(k - 1, x - h)) / (2.0 * h);
}

std::vector<std::string> catalog_names() {
  return {"power:0.5",    "power:0.3",     "signed_power:0.7", "log1p", "signed_log1p", "rational:1",
          "rational:2.5", "signed_rational:1", "signed_expm1",  "gauss", "linear"};
}

}  // namespace

TEST(Catalog, PointValues) {
  EXPECT_DOUBLE_EQ(catalog::power(0.5)(4.0), 2.0);
  EXPECT_DOUBLE_EQ(catalog::power(0.5)(-4.0), 2.0);
  EXPECT_DOUBLE_EQ(catalog::signed_power(0.5)(-4.0), -2.0);
  EXPECT_DOUBLE_EQ(catalog::rational(1.0)(1.0), 0.5);
  EXPECT_DOUBLE_EQ(catalog::log1p()(-(std::numbers::e - 1.0)), 1.0);
  EXPECT_DOUBLE_EQ(catalog::gauss()(1.0), std::exp(-1.0));
  EXPECT_EQ(catalog::make("power:0.25").name(), "power:0.25");
}

TEST(Catalog, DerivativesMatchFiniteDifferences) {
  for (const auto& name : catalog_names()) {
    const auto f = catalog::make(name);
    for (double x : {0.1, 1.0, 10.0, -0.1, -1.0, -10.0}) {
      for (int k = 1; k <= 6; ++k) {
        const double exact = f.derivative(k, x), approx = fd(f, k, x);
        EXPECT_NEAR(exact, approx, 1e-6 * std::max(1.0, std::abs(exact))) << name << " k=" << k << " x=" << x;
      }
    }
  }
}

TEST(Catalog, DerivativeOrderIsCapped) {
  const auto f = catalog::power(0.5);
  EXPECT_THROW(f.derivative(f.max_order() + 1, 1.0), capability_error);
  EXPECT_GE(f.max_order(), 6);
}

TEST(Catalog, SingularAtZeroIsNaN) {
  EXPECT_TRUE(std::isnan(catalog::power(0.5).derivative(1, 0.0)));
  EXPECT_EQ(catalog::power(0.5)(0.0), 0.0);
  EXPECT_TRUE(std::isnan(catalog::log1p().derivative(1, 0.0)));
  EXPECT_DOUBLE_EQ(catalog::signed_log1p().derivative(1, 0.0), 1.0);
}

TEST(Catalog, RejectsBadNames) {
  EXPECT_THROW(catalog::make("power"), parameter_error);
  EXPECT_THROW(catalog::make("power:abc"), parameter_error);
  EXPECT_THROW(catalog::make("log1p:2"), parameter_error);
  EXPECT_THROW(catalog::make("sine"), parameter_error);
  EXPECT_THROW(catalog::make("power:1.5"), parameter_error);
  EXPECT_THROW(catalog::make("rational:-1"), parameter_error);
}

TEST(Seminorm, PowerHalfIsAnalytic) {
  const auto est = seminorm(catalog::power(0.5), 2, 0.5);
  ASSERT_EQ(est.per_order.size(), 3u);
  EXPECT_NEAR(est.per_order[0], 1.0, 1e-12);
  EXPECT_NEAR(est.per_order[1], 0.5, 1e-12);
  EXPECT_NEAR(est.per_order[2], 0.25, 1e-12);
  EXPECT_NEAR(est.value, 1.0, 1e-12);
}

TEST(Seminorm, LinearAtThetaOne) { EXPECT_NEAR(seminorm(catalog::linear(), 1, 1.0).value, 1.0, 1e-15); }

TEST(Seminorm, MatchesAnalyticSupremaForNonHomogeneousEntries) {
  for (const std::string name : {"log1p", "rational:1", "rational:3"}) {
    const auto f = catalog::make(name);
    for (double theta : {0.3, 0.5, 0.8}) {
      const auto est = seminorm(f, 4, theta);
      for (int k = 1; k <= 4; ++k) {
        const auto sup = f.analytic_sup(k, theta);
        ASSERT_TRUE(sup.has_value());
        EXPECT_NEAR(est.per_order[static_cast<std::size_t>(k)], *sup, 1e-9 * *sup) << name << " k=" << k;
      }
    }
  }
}

TEST(Seminorm, DilationLawForHomogeneousEntries) {
  for (const std::string name : {"power:0.5", "signed_power:0.3", "power:0.75"}) {
    const auto f = catalog::make(name);
    const double theta = *f.theta_hint();
    for (double r : {0.25, 3.0, 10.0}) {
      const double a = seminorm(f.dilated(r), 4, theta).value;
      const double b = std::pow(r, -theta) * seminorm(f, 4, theta).value;
      EXPECT_NEAR(a, b, 1e-8 * b) << name << " r=" << r;
    }
  }
}

TEST(Seminorm, MonotoneInOrder) {
  for (const auto& name : catalog_names()) {
    const auto f = catalog::make(name);
    const double theta = f.theta_hint().value_or(0.5);
    double prev = 0.0;
    for (int d = 0; d <= 5; ++d) {
      const double v = seminorm(f, d, theta).value;
      EXPECT_GE(v, prev) << name;
      prev = v;
    }
  }
}

TEST(Seminorm, RejectsOrdersBeyondTheCatalog) {
  EXPECT_THROW(seminorm(catalog::power(0.5), 9, 0.5), capability_error);
  EXPECT_THROW(seminorm(catalog::power(0.5), 2, 0.0), parameter_error);
}

TEST(HolderBound, KnownValues) {
  EXPECT_NEAR(holder_bound(catalog::power(0.5), 0.5), 4.0, 1e-12);
  EXPECT_NEAR(holder_bound(catalog::linear(), 1.0), 2.0, 1e-15);
}

TEST(HolderBound, NeverViolatedBySampledPairs) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (const auto& name : catalog_names()) {
    if (name == "signed_expm1" || name == "linear") continue;
    const auto f = catalog::make(name);
    const double theta = f.theta_hint().value_or(0.5);
    const double bound = holder_bound(f, theta);
    for (int i = 0; i < 2000; ++i) {
      const double x = u(rng), y = u(rng);
      if (x == y) continue;
      EXPECT_LE(std::abs(f(x) - f(y)) / std::pow(std::abs(x - y), theta), bound * (1.0 + 1e-8)) << name;
    }
  }
}

TEST(DividedDifference, Values) {
  const ScalarFunction square("square", [](int k, double x) { return k == 0 ? x * x : (k == 1 ? 2 * x : (k == 2 ? 2.0 : 0.0)); }, 3);
  EXPECT_DOUBLE_EQ(divided_difference(square, 1.0, 3.0), 4.0);
  const auto f = catalog::power(0.5);
  EXPECT_DOUBLE_EQ(divided_difference(f, 4.0, 4.0), 0.25);
  EXPECT_NEAR(divided_difference(f, 1.0, 1.0 + 1e-14), 0.5, 1e-6);
  EXPECT_THROW(divided_difference(f, 0.0, 0.0), singularity_error);
}

TEST(DividedDifference, SymmetricAndBoundedByDerivative) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (const auto& name : catalog_names()) {
    const auto f = catalog::make(name);
    for (int i = 0; i < 300; ++i) {
      double x = u(rng), y = u(rng);
      if (i % 2) x = -x, y = -y;
      EXPECT_EQ(divided_difference(f, x, y), divided_difference(f, y, x));
      double sup = 0.0;
      for (int j = 0; j <= 200; ++j) sup = std::max(sup, std::abs(f.derivative(1, x + (y - x) * j / 200.0)));
      EXPECT_LE(std::abs(divided_difference(f, x, y)), sup * (1.0 + 1e-6)) << name;
    }
  }
}

TEST(DOfP, Values) {
  EXPECT_EQ(d_of_p(1.0), 4);
  EXPECT_EQ(d_of_p(2.0), 4);
  EXPECT_EQ(d_of_p(0.5), 5);
  EXPECT_EQ(d_of_p(1.0 / 3.0), 6);
  EXPECT_EQ(d_of_p(0.75), 4);
  EXPECT_THROW(d_of_p(0.0), parameter_error);
}

TEST(DyadicScalarSum, BoundedByTheProofConstant) {
  for (double theta : {0.3, 0.5, 0.7}) {
    for (double q : {0.5, 1.0, 2.0}) {
      for (int i = 0; i < 50; ++i) {
        const double alpha = std::pow(10.0, -6.0 + 12.0 * i / 49.0);
        const auto r = dyadic_scalar_sum(theta, q, alpha);
        EXPECT_LT(r.tail_bound, 1e-12 * r.lhs);
        EXPECT_LE(r.lhs, r.rhs_constant * std::pow(alpha, theta * q));
        const double c = std::pow(2.0, q * (1 - theta)) *
                         (1 / (1 - std::pow(2.0, q * (theta - 1))) + 1 / (1 - std::pow(2.0, -q * theta)));
        EXPECT_NEAR(r.rhs_constant, c, 1e-14 * c);
      }
    }
  }
}

TEST(DyadicScalarSum, AgreesWithBruteForceSummation) {
  for (double alpha : {1e-3, 0.7, 1.0, 5.0, 1e4}) {
    const double theta = 0.5, q = 1.0;
    double brute = 0.0;
    for (int l = -400; l <= 400; ++l) {
      brute += std::pow(2.0, q * l * (1 - theta)) * std::pow(std::min(alpha, std::pow(2.0, 1.0 - l)), q);
    }
    const auto r = dyadic_scalar_sum(theta, q, alpha);
    EXPECT_NEAR(r.lhs, brute, 1e-12 * brute) << alpha;
  }
}

TEST(DyadicScalarSum, ScalesLikeAlphaToThetaQ) {
  const double theta = 0.5, q = 1.0;
  const double c = dyadic_scalar_sum(theta, q, 1.0).rhs_constant;
  for (double alpha : {1e-4, 0.3, 1.0, 70.0}) {
    const double ratio = dyadic_scalar_sum(theta, q, 2 * alpha).lhs / dyadic_scalar_sum(theta, q, alpha).lhs;
    EXPECT_GT(ratio, std::pow(2.0, theta * q) / c);
    EXPECT_LT(ratio, std::pow(2.0, theta * q) * c);
  }
}

TEST(DyadicScalarSum, TailTermsDecayGeometrically) {
  // for l well past the crossover, consecutive terms shrink by 2^{-q theta}
  const double theta = 0.3, q = 2.0, alpha = 1e-3;
  auto term = [&](int l) { return std::pow(2.0, q * l * (1 - theta)) * std::pow(std::min(alpha, std::pow(2.0, 1.0 - l)), q); };
  for (int l = 20; l < 30; ++l) EXPECT_NEAR(term(l + 1) / term(l), std::pow(2.0, -q * theta), 1e-12);
}

TEST(Invert, RecoversPreimages) {
  const auto f = catalog::signed_power(0.5);
  EXPECT_NEAR(invert(f, 3.0), 9.0, 1e-9);
  EXPECT_NEAR(invert(f, -2.0), -4.0, 1e-9);
  EXPECT_NEAR(invert(catalog::signed_log1p(), std::log(3.0)), 2.0, 1e-10);
  EXPECT_THROW(invert(catalog::signed_rational(1.0), 2.0), domain_error);
  EXPECT_TRUE(strictly_monotone_on(f, -3.0, 3.0));
  EXPECT_FALSE(strictly_monotone_on(catalog::power(0.5), -3.0, 3.0));
}

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

#include <algorithm>
#include <cmath>
#include <set>

using namespace opholder;
using namespace opholder::testing;

TEST(SeedState, DerivationIsPureAndPathSensitive) {
  const SeedState a{7, {1, 2}}, b{7, {1, 2}};
  EXPECT_EQ(a.derive(), b.derive());
  EXPECT_NE(a.derive(), (SeedState{7, {2, 1}}).derive());
  EXPECT_NE(a.derive(), (SeedState{8, {1, 2}}).derive());
  EXPECT_NE(a.derive(), a.child(0).derive());
  EXPECT_EQ(a.child(3), (SeedState{7, {1, 2, 3}}));
  EXPECT_EQ(a.digest(), "7/1/2");
  std::set<std::uint64_t> seen;
  for (std::uint64_t c = 0; c < 50; ++c) {
    for (std::uint64_t t = 0; t < 50; ++t) seen.insert(SeedState{0, {c, t}}.derive());
  }
  EXPECT_EQ(seen.size(), 2500u);
}

TEST(Sample, DeterministicForEveryEnsemble) {
  const std::vector<EnsembleSpec> specs = {
      ensemble::GaussianHermitian{4, 1.0},  ensemble::FixedSpectrum{{1, 2, 3}, true},
      ensemble::PositivePair{4, 0.0, 1.0},   ensemble::RankRDifference{5, 2, 1e-2, 1.0},
      ensemble::DegenerateSpectrum{{2, 1}}, ensemble::CommutingPair{3},
      ensemble::Contraction{3},              ensemble::GeneralGaussian{3}};
  for (const auto& spec : specs) {
    const SeedState seed{99, {3, 4}};
    const auto a = sample(spec, seed), b = sample(spec, seed), c = sample(spec, seed.child(0));
    ASSERT_EQ(a.matrices.size(), b.matrices.size());
    for (std::size_t i = 0; i < a.matrices.size(); ++i) {
      EXPECT_EQ(a.matrices[i], b.matrices[i]) << ensemble_kind(spec);
      if (!std::holds_alternative<ensemble::FixedSpectrum>(spec)) {
        EXPECT_NE(a.matrices[i], c.matrices[i]);
      }
    }
  }
}

TEST(Sample, FixedSpectrumWithoutRotationIsDiagonal) {
  const auto s = sample(ensemble::FixedSpectrum{{1, 2, 3}, false}, SeedState{1, {}});
  EXPECT_EQ(s.matrices.at(0), HermitianMatrix::diagonal({1, 2, 3}).matrix());
  const auto r = sample(ensemble::FixedSpectrum{{1, 2, 3}, true}, SeedState{1, {}});
  const auto ev = eig_hermitian(r.hermitian(0)).eigenvalues;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(ev(i), i + 1.0, 1e-12);
}

TEST(Sample, CommutingPairCommutes) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto s = sample(ensemble::CommutingPair{5}, SeedState{2, {t}});
    const GeneralMatrix& a = s.matrices[0];
    const GeneralMatrix& b = s.matrices[1];
    EXPECT_LE(operator_norm(GeneralMatrix(a * b - b * a)), 1e-12);
  }
}

TEST(Sample, PositivePairIsPositiveWithinRange) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto s = sample(ensemble::PositivePair{4, 0.25, 2.0}, SeedState{3, {t}});
    for (int i = 0; i < 2; ++i) {
      const auto ev = eig_hermitian(s.hermitian(i)).eigenvalues;
      EXPECT_GE(ev.minCoeff(), 0.25 - 1e-12);
      EXPECT_LE(ev.maxCoeff(), 2.0 + 1e-12);
    }
  }
}

TEST(Sample, RankRDifferenceHasExactSingularValues) {
  for (std::uint64_t t = 0; t < 30; ++t) {
    const auto s = sample(ensemble::RankRDifference{6, 3, 1e-3, 10.0}, SeedState{4, {t}});
    const auto mu = singular_values(GeneralMatrix(s.matrices[0] - s.matrices[1])).values();
    std::vector<double> expected;
    for (double x : s.step_magnitudes) expected.push_back(std::abs(x));
    std::sort(expected.begin(), expected.end(), std::greater<>());
    expected.resize(6, 0.0);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(mu[i], expected[i], 1e-12 * 10.0);
    for (double x : s.step_magnitudes) {
      EXPECT_GE(std::abs(x), 1e-3);
      EXPECT_LE(std::abs(x), 10.0);
    }
    // the step vectors are orthonormal
    const GeneralMatrix& v = s.step_vectors;
    EXPECT_LE(max_abs(v.adjoint() * v - GeneralMatrix::Identity(3, 3)), 1e-12);
  }
}

TEST(Sample, DegenerateSpectrumRepeatsEigenvalues) {
  const auto s = sample(ensemble::DegenerateSpectrum{{3, 1, 2}}, SeedState{5, {}});
  const auto ev = eig_hermitian(s.hermitian(0)).eigenvalues;
  ASSERT_EQ(ev.size(), 6);
  std::vector<double> v(ev.data(), ev.data() + 6);
  int distinct = 1;
  for (std::size_t i = 1; i < v.size(); ++i) distinct += std::abs(v[i] - v[i - 1]) > 1e-9;
  EXPECT_EQ(distinct, 3);
}

TEST(Sample, ContractionHasUnitNorm) {
  const auto s = sample(ensemble::Contraction{5}, SeedState{6, {}});
  EXPECT_NEAR(operator_norm(s.matrices[0]), 1.0, 1e-12);
}

TEST(Sample, RejectsInvalidSpecs) {
  EXPECT_THROW(sample(ensemble::GaussianHermitian{0, 1.0}, {}), parameter_error);
  EXPECT_THROW(sample(ensemble::RankRDifference{3, 4, 0.1, 1.0}, {}), parameter_error);
  EXPECT_THROW(sample(ensemble::DegenerateSpectrum{{2, 0}}, {}), parameter_error);
  EXPECT_THROW(sample(ensemble::PositivePair{3, -1.0, 1.0}, {}), parameter_error);
  EXPECT_THROW(sample(ensemble::FixedSpectrum{{}, true}, {}), parameter_error);
  EXPECT_THROW(with_dim(ensemble::FixedSpectrum{{1, 2}, true}, 3), parameter_error);
  EXPECT_EQ(ensemble_dim(with_dim(ensemble::PositivePair{2, 0, 1}, 7)), 7);
}

TEST(HaarUnitary, IsUnitary) {
  std::mt19937_64 rng(61);
  for (int n = 1; n <= 8; ++n) {
    const GeneralMatrix u = haar_unitary(n, rng);
    EXPECT_LE(max_abs(u.adjoint() * u - GeneralMatrix::Identity(n, n)), 1e-12);
  }
}

TEST(HaarUnitary, TraceAndEntryMomentsMatchHaar) {
  std::mt19937_64 rng(62);
  const int samples = 10000, n = 4;
  Complex trace_sum = 0.0, entry_sum = 0.0;
  double trace_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const GeneralMatrix u = haar_unitary(n, rng);
    const Complex tr = u.trace();
    trace_sum += tr;
    trace_sq += std::norm(tr);
    entry_sum += u(0, 0);
  }
  // E tr U = 0 with Var(Re tr U) = 1/2; E |tr U|^2 = 1
  const double sigma = std::sqrt(0.5 / samples);
  EXPECT_LE(std::abs(trace_sum.real() / samples), 3 * sigma);
  EXPECT_LE(std::abs(trace_sum.imag() / samples), 3 * sigma);
  EXPECT_NEAR(trace_sq / samples, 1.0, 0.05);
  // an unrotated QR would bias the phase of U_11; Var(Re U_11) = 1/(2n)
  const double entry_sigma = std::sqrt(0.5 / n / samples);
  EXPECT_LE(std::abs(entry_sum.real() / samples), 3 * entry_sigma);
  EXPECT_LE(std::abs(entry_sum.imag() / samples), 3 * entry_sigma);
}

TEST(HaarUnitary, PreservesSingularValues) {
  std::mt19937_64 rng(63);
  const GeneralMatrix v = gaussian(5, 5, rng);
  const auto mv = singular_values(v).values();
  for (int i = 0; i < 10; ++i) {
    const auto mu = singular_values(GeneralMatrix(haar_unitary(5, rng) * v)).values();
    for (std::size_t k = 0; k < mv.size(); ++k) EXPECT_NEAR(mu[k], mv[k], 1e-12 * mv[0]);
  }
}

TEST(SamplePair, DrawsIndependentMatricesForSingleEnsembles) {
  const auto [a, b] = sample_pair(ensemble::GaussianHermitian{3, 1.0}, SeedState{8, {1}});
  EXPECT_NE(a.matrix(), b.matrix());
  const auto again = sample_pair(ensemble::GaussianHermitian{3, 1.0}, SeedState{8, {1}});
  EXPECT_EQ(a.matrix(), again.first.matrix());
  EXPECT_EQ(b.matrix(), again.second.matrix());
}

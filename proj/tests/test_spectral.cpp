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

#include <limits>

using namespace opholder;
using namespace opholder::testing;

namespace {

GeneralMatrix diag(std::initializer_list<double> d) { return HermitianMatrix::diagonal(d).matrix(); }

}  // namespace

TEST(HermitianMatrix, SymmetrizesWithinTolerance) {
  GeneralMatrix m(2, 2);
  m << 1.0, Complex(2.0, 1e-13), Complex(2.0, 0.0), 3.0;
  const HermitianMatrix h(m);
  EXPECT_EQ(h.matrix(), h.matrix().adjoint());
}

TEST(HermitianMatrix, RejectsNonHermitianAndNonSquare) {
  GeneralMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  EXPECT_THROW(HermitianMatrix{m}, domain_error);
  EXPECT_THROW(HermitianMatrix{GeneralMatrix(GeneralMatrix::Zero(2, 3))}, shape_error);
}

TEST(EigHermitian, ReconstructsRandomInputs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = hermitian(1 + trial % 9, rng);
    const auto dec = eig_hermitian(a);
    EXPECT_LE(max_abs(dec.reconstruct() - a.matrix()), 1e-10 * (1.0 + operator_norm(a.matrix())));
    for (Eigen::Index i = 1; i < dec.dim(); ++i) EXPECT_LE(dec.eigenvalues(i - 1), dec.eigenvalues(i));
  }
}

TEST(SpectralProjection, SelectsHalfOpenIntervals) {
  const auto d1 = eig_hermitian(HermitianMatrix::diagonal({-1.0, 0.0, 2.0}));
  EXPECT_LE(max_abs(spectral_projection(d1, Interval::half_open(0.5, std::numeric_limits<double>::infinity())).matrix() -
                    diag({0, 0, 1})),
            1e-14);
  EXPECT_LE(max_abs(spectral_projection(d1, Interval::real_line()).matrix() - GeneralMatrix::Identity(3, 3)), 1e-14);

  const auto d2 = eig_hermitian(HermitianMatrix::diagonal({0.3, 0.6}));
  const auto p = spectral_projection(d2, Interval::half_open(0.5, 1.0));
  EXPECT_LE(max_abs(p.matrix() - diag({0, 1})), 1e-14);
  EXPECT_EQ(p.rank(), 1);
  // the left endpoint belongs to the interval, the right one does not
  const auto d3 = eig_hermitian(HermitianMatrix::diagonal({0.5, 1.0}));
  EXPECT_EQ(spectral_projection(d3, Interval::half_open(0.5, 1.0)).rank(), 1);
  EXPECT_EQ(spectral_projection(d3, Interval::open(0.5, 1.0)).rank(), 0);
}

TEST(SpectralProjection, DyadicPartitionSumsToIdentity) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const RealVector ev = uniform(6, 1.0 / 64.0, 1.0, rng);
    const auto dec = eig_hermitian(with_spectrum(ev, rng));
    GeneralMatrix sum = GeneralMatrix::Zero(6, 6);
    for (int k = 0; k < 7; ++k) {
      sum += spectral_projection(dec, Interval::half_open(std::ldexp(1.0, -k - 1), std::ldexp(1.0, -k))).matrix();
    }
    EXPECT_LE(max_abs(sum - GeneralMatrix::Identity(6, 6)), 1e-10);
  }
}

TEST(SupportParts, SplitsBySign) {
  const auto parts = support_parts(eig_hermitian(HermitianMatrix::diagonal({1.0, -1.0, 0.0})));
  EXPECT_LE(max_abs(parts.s_plus.matrix() - diag({1, 0, 0})), 1e-14);
  EXPECT_LE(max_abs(parts.s_minus.matrix() - diag({0, 1, 0})), 1e-14);
  EXPECT_LE(max_abs(parts.kernel.matrix() - diag({0, 0, 1})), 1e-14);
}

TEST(SupportParts, PositiveDefiniteIsAllPlus) {
  std::mt19937_64 rng(13);
  const auto a = with_spectrum(uniform(5, 0.5, 2.0, rng), rng);
  const auto parts = support_parts(eig_hermitian(a));
  EXPECT_LE(max_abs(parts.s_plus.matrix() - GeneralMatrix::Identity(5, 5)), 1e-10);
  EXPECT_EQ(parts.s_minus.rank(), 0);
  EXPECT_EQ(parts.kernel.rank(), 0);
}

TEST(SupportParts, TinyEigenvaluesCountAsKernel) {
  const auto parts = support_parts(eig_hermitian(HermitianMatrix::diagonal({1e-15, 2.0})));
  EXPECT_LE(max_abs(parts.s_plus.matrix() - diag({0, 1})), 1e-14);
  EXPECT_LE(max_abs(parts.kernel.matrix() - diag({1, 0})), 1e-14);
}

TEST(ApplyFunction, IsMultiplicativeForPolynomials) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = hermitian(5, rng);
    const auto f = [](double x) { return x * x - 2.0 * x + 0.5; };
    const auto g = [](double x) { return 3.0 * x * x * x + x; };
    const auto fg = [&](double x) { return f(x) * g(x); };
    const GeneralMatrix prod = apply_function(f, a).matrix() * apply_function(g, a).matrix();
    EXPECT_LE(max_abs(apply_function(fg, a).matrix() - prod), 1e-9 * (1.0 + max_abs(prod)));
    // polynomial calculus against direct matrix arithmetic
    const GeneralMatrix& m = a.matrix();
    const GeneralMatrix direct = m * m - 2.0 * m + 0.5 * GeneralMatrix::Identity(5, 5);
    EXPECT_LE(max_abs(apply_function(f, a).matrix() - direct), 1e-10 * (1.0 + max_abs(direct)));
  }
}

TEST(ApplyFunction, IsUnitarilyCovariant) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = hermitian(4, rng);
    const GeneralMatrix u = unitary(4, rng);
    const auto f = [](double x) { return std::pow(std::abs(x), 0.5); };
    const HermitianMatrix rotated(GeneralMatrix(u.adjoint() * a.matrix() * u));
    const GeneralMatrix lhs = apply_function(f, rotated).matrix();
    const GeneralMatrix rhs = u.adjoint() * apply_function(f, a).matrix() * u;
    EXPECT_LE(max_abs(lhs - rhs), 1e-10);
  }
}

TEST(ApplyFunction, RejectsNonFiniteValues) {
  EXPECT_THROW(apply_function([](double x) { return 1.0 / x; }, HermitianMatrix::diagonal({0.0, 1.0})),
               domain_error);
}

TEST(AbsMatrix, MatchesKnownCases) {
  EXPECT_LE(max_abs(abs_matrix(diag({-3, 4})).matrix() - diag({3, 4})), 1e-14);
  std::mt19937_64 rng(16);
  const GeneralMatrix u = unitary(4, rng);
  EXPECT_LE(max_abs(abs_matrix(u).matrix() - GeneralMatrix::Identity(4, 4)), 1e-12);
}

TEST(AbsMatrix, EigenvaluesAreSingularValues) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const GeneralMatrix x = gaussian(4, 4, rng);
    const auto dec = eig_hermitian(abs_matrix(x));
    const auto sv = singular_values_oracle(x);
    for (std::size_t i = 0; i < sv.size(); ++i) {
      EXPECT_NEAR(dec.eigenvalues(static_cast<Eigen::Index>(sv.size() - 1 - i)), sv[i], 1e-10);
    }
    // |X|^2 = X^* X
    const GeneralMatrix sq = abs_matrix(x).matrix() * abs_matrix(x).matrix();
    EXPECT_LE(max_abs(sq - x.adjoint() * x), 1e-10 * (1.0 + max_abs(sq)));
  }
}

TEST(Cayley, ScalarValues) {
  EXPECT_NEAR(std::abs(cayley(HermitianMatrix::zero(1))(0, 0) - Complex(-1.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(cayley(HermitianMatrix::identity(1))(0, 0) - Complex(0.0, -1.0)), 0.0, 1e-15);
}

TEST(Cayley, IsUnitaryAndInvertible) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = hermitian(5, rng);
    const HermitianMatrix b(GeneralMatrix(h.matrix() / operator_norm(h.matrix())));
    const GeneralMatrix u = cayley(b);
    EXPECT_LE(max_abs(u.adjoint() * u - GeneralMatrix::Identity(5, 5)), 1e-12);
    EXPECT_LE(max_abs(cayley_inverse(u) - b.matrix()), 1e-10);
  }
  EXPECT_THROW(cayley_inverse(GeneralMatrix::Identity(2, 2)), domain_error);
}

TEST(Dilation, BlockStructure) {
  const auto d = dilate_2x2(HermitianMatrix::diagonal({2.0}), HermitianMatrix::diagonal({3.0}),
                            GeneralMatrix::Identity(1, 1));
  EXPECT_LE(max_abs(d.a.matrix() - diag({2, 3})), 1e-15);
  EXPECT_LE(max_abs(d.b.matrix() - diag({3, 2})), 1e-15);
  std::mt19937_64 rng(19);
  const auto a = hermitian(3, rng);
  const auto same = dilate_2x2(a, a, gaussian(3, 3, rng));
  EXPECT_EQ(same.a.matrix(), same.b.matrix());
}

TEST(Dilation, DoublesQuasiCommutatorSingularValues) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = hermitian(3, rng), b = hermitian(3, rng);
    const GeneralMatrix r = gaussian(3, 3, rng);
    const auto d = dilate_2x2(a, b, r);
    const auto big = singular_values_oracle(d.a.matrix() * d.r - d.r * d.b.matrix());
    const auto small = singular_values_oracle(a.matrix() * r - r * b.matrix());
    for (std::size_t i = 0; i < small.size(); ++i) {
      EXPECT_NEAR(big[2 * i], small[i], 1e-10);
      EXPECT_NEAR(big[2 * i + 1], small[i], 1e-10);
    }
  }
}

TEST(SwapUnitary, ExchangesBlocks) {
  std::mt19937_64 rng(21);
  const auto a = hermitian(2, rng), b = hermitian(2, rng);
  const auto d = dilate_2x2(a, b, GeneralMatrix::Identity(2, 2));
  const GeneralMatrix s = swap_unitary(2);
  EXPECT_LE(max_abs(s * d.a.matrix() * s.adjoint() - d.b.matrix()), 1e-15);
}

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

// Independent helpers for the test suite. Random inputs here come from the
// standard library directly so the library's own generators are not their
// own oracle.

#pragma once

#include "opholder.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace opholder::testing {

inline GeneralMatrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  GeneralMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = Complex(n(rng), n(rng));
  }
  return m;
}

inline HermitianMatrix hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const GeneralMatrix g = gaussian(n, n, rng);
  return HermitianMatrix(GeneralMatrix(0.5 * (g + g.adjoint())));
}

inline HermitianMatrix psd(Eigen::Index n, std::mt19937_64& rng) {
  const GeneralMatrix g = gaussian(n, n, rng);
  return HermitianMatrix(GeneralMatrix(g * g.adjoint() / static_cast<double>(n)));
}

inline GeneralMatrix unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<GeneralMatrix> qr(gaussian(n, n, rng));
  return qr.householderQ() * GeneralMatrix::Identity(n, n);
}

/// Hermitian matrix with the given spectrum in a random basis.
inline HermitianMatrix with_spectrum(const RealVector& ev, std::mt19937_64& rng) {
  const GeneralMatrix u = unitary(ev.size(), rng);
  return HermitianMatrix(GeneralMatrix(u * ev.cast<Complex>().asDiagonal() * u.adjoint()));
}

inline RealVector uniform(Eigen::Index n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  RealVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline double max_abs(const GeneralMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Singular values from the eigenvalues of X^* X, descending.
inline std::vector<double> singular_values_oracle(const GeneralMatrix& x) {
  Eigen::SelfAdjointEigenSolver<GeneralMatrix> es(x.adjoint() * x);
  std::vector<double> s;
  for (Eigen::Index i = es.eigenvalues().size(); i-- > 0;) s.push_back(std::sqrt(std::max(es.eigenvalues()(i), 0.0)));
  return s;
}

}  // namespace opholder::testing

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
 * @brief Finite self-adjoint operators and their functional calculus.
 *
 * A HermitianMatrix is the finite-dimensional stand-in for a self-adjoint
 * operator; the trace is the matrix trace, spectral measures are sums of
 * eigenprojections.
 */

#pragma once

#include "errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace opholder {

using Complex = std::complex<double>;
using GeneralMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds shared by the spectral routines.
struct Tolerances {
  double hermitian = 1e-10;  ///< relative, for accepting an input as Hermitian
  double recon = 1e-10;      ///< relative, for reconstruction and projection residuals
  double zero = 1e-12;       ///< eigenvalue counts as zero iff |lambda| <= zero * (1 + ||A||_inf)
};

/// Largest singular value.
inline double operator_norm(const GeneralMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<GeneralMatrix> svd(m);
  return svd.singularValues()(0);
}

/// Square complex matrix equal to its conjugate transpose.
///
/// Construction symmetrizes (A + A^*)/2 after checking that the input is
/// Hermitian within a relative tolerance, so downstream eigensolvers see an
/// exactly self-adjoint matrix.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const GeneralMatrix& m, double tol = Tolerances{}.hermitian) {
    if (m.rows() != m.cols()) {
      throw shape_error("HermitianMatrix: matrix is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + ", expected square");
    }
    if (m.rows() < 1) throw shape_error("HermitianMatrix: dimension must be at least 1");
    const double scale = m.cwiseAbs().maxCoeff();
    const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (!(skew <= tol * (1.0 + scale))) {
      std::ostringstream os;
      os << "HermitianMatrix: input deviates from its adjoint by " << skew;
      throw domain_error(os.str());
    }
    m_ = 0.5 * (m + m.adjoint());
  }

  static HermitianMatrix diagonal(const RealVector& d) {
    return HermitianMatrix(d.cast<Complex>().asDiagonal().toDenseMatrix());
  }
  static HermitianMatrix diagonal(std::initializer_list<double> d) {
    RealVector v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v(i++) = x;
    return diagonal(v);
  }
  static HermitianMatrix identity(Eigen::Index n) { return HermitianMatrix(GeneralMatrix::Identity(n, n)); }
  static HermitianMatrix zero(Eigen::Index n) { return HermitianMatrix(GeneralMatrix::Zero(n, n)); }

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const GeneralMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.m_ + b.m_);
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.m_ - b.m_);
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) { return HermitianMatrix(s * a.m_); }
  HermitianMatrix operator-() const { return HermitianMatrix(-m_); }

 private:
  GeneralMatrix m_;
};

/// Eigenvalues in ascending order with a unitary eigenbasis (columns).
struct SpectralDecomposition {
  RealVector eigenvalues;
  GeneralMatrix basis;

  Eigen::Index dim() const noexcept { return eigenvalues.size(); }
  double spectral_radius() const { return dim() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff(); }

  GeneralMatrix reconstruct() const {
    return basis * eigenvalues.cast<Complex>().asDiagonal() * basis.adjoint();
  }
};

inline SpectralDecomposition eig_hermitian(const HermitianMatrix& a, const Tolerances& tol = {}) {
  Eigen::SelfAdjointEigenSolver<GeneralMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw convergence_error("eig_hermitian: eigensolver did not converge",
                            std::numeric_limits<double>::infinity());
  }
  SpectralDecomposition dec{solver.eigenvalues(), solver.eigenvectors()};
  const double scale = 1.0 + dec.spectral_radius();
  const double residual = (dec.reconstruct() - a.matrix()).cwiseAbs().maxCoeff();
  if (!(residual <= tol.recon * scale)) {
    throw convergence_error("eig_hermitian: reconstruction residual too large", residual);
  }
  return dec;
}

/// Real interval, closed or open at the lower end and always open at the upper end.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = false;

  static Interval half_open(double a, double b) { return {a, b, false}; }
  static Interval open(double a, double b) { return {a, b, true}; }
  static Interval real_line() { return {}; }

  bool contains(double x) const noexcept { return (lo_open ? x > lo : x >= lo) && x < hi; }
};

/// Orthogonal projection; P^2 = P = P^* within the reconstruction tolerance.
class ProjectionMatrix {
 public:
  ProjectionMatrix() = default;

  explicit ProjectionMatrix(HermitianMatrix p, const Tolerances& tol = {}) : p_(std::move(p)) {
    const double idem = (p_.matrix() * p_.matrix() - p_.matrix()).cwiseAbs().maxCoeff();
    if (!(idem <= tol.recon * (1.0 + p_.matrix().cwiseAbs().maxCoeff()))) {
      throw domain_error("ProjectionMatrix: matrix is not idempotent");
    }
  }

  Eigen::Index dim() const noexcept { return p_.dim(); }
  const GeneralMatrix& matrix() const noexcept { return p_.matrix(); }
  const HermitianMatrix& hermitian() const noexcept { return p_; }
  long rank() const { return std::lround(p_.matrix().trace().real()); }

 private:
  HermitianMatrix p_;
};

/// Projection onto the span of the eigenvectors whose index satisfies `keep`.
template <typename Pred>
ProjectionMatrix projection_where(const SpectralDecomposition& dec, Pred keep) {
  const Eigen::Index n = dec.dim();
  GeneralMatrix p = GeneralMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (keep(dec.eigenvalues(i))) p.noalias() += dec.basis.col(i) * dec.basis.col(i).adjoint();
  }
  return ProjectionMatrix(HermitianMatrix(p));
}

/// chi_I(A) for an interval I.
inline ProjectionMatrix spectral_projection(const SpectralDecomposition& dec, const Interval& interval) {
  return projection_where(dec, [&](double lambda) { return interval.contains(lambda); });
}

inline double zero_threshold(const SpectralDecomposition& dec, const Tolerances& tol = {}) {
  return tol.zero * (1.0 + dec.spectral_radius());
}

/// s(A)_+, s(A)_- and the kernel projection n(A).
struct SupportParts {
  ProjectionMatrix s_plus;
  ProjectionMatrix s_minus;
  ProjectionMatrix kernel;
};

inline SupportParts support_parts(const SpectralDecomposition& dec, const Tolerances& tol = {}) {
  const double z = zero_threshold(dec, tol);
  return {projection_where(dec, [z](double l) { return l > z; }),
          projection_where(dec, [z](double l) { return l < -z; }),
          projection_where(dec, [z](double l) { return std::abs(l) <= z; })};
}

/// f(A) = U f(Lambda) U^* for a real-valued f.
template <typename F>
HermitianMatrix apply_function(F&& f, const SpectralDecomposition& dec) {
  RealVector values(dec.dim());
  for (Eigen::Index i = 0; i < dec.dim(); ++i) {
    const double lambda = dec.eigenvalues(i);
    const double v = f(lambda);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "apply_function: f is not finite at eigenvalue " << lambda;
      throw domain_error(os.str());
    }
    values(i) = v;
  }
  return HermitianMatrix(dec.basis * values.cast<Complex>().asDiagonal() * dec.basis.adjoint());
}

template <typename F>
HermitianMatrix apply_function(F&& f, const HermitianMatrix& a) {
  return apply_function(std::forward<F>(f), eig_hermitian(a));
}

/// |X| = (X^* X)^{1/2}.
inline HermitianMatrix abs_matrix(const GeneralMatrix& x) {
  if (x.rows() != x.cols()) throw shape_error("abs_matrix: input must be square");
  Eigen::JacobiSVD<GeneralMatrix> svd(x, Eigen::ComputeFullV);
  const GeneralMatrix& v = svd.matrixV();
  return HermitianMatrix(v * svd.singularValues().cast<Complex>().asDiagonal() * v.adjoint());
}

/// U = (B - i)(B + i)^{-1}, evaluated through the eigendecomposition of B.
inline GeneralMatrix cayley(const HermitianMatrix& b) {
  const auto dec = eig_hermitian(b);
  const Complex i(0.0, 1.0);
  Eigen::VectorXcd mu(dec.dim());
  for (Eigen::Index k = 0; k < dec.dim(); ++k) mu(k) = (dec.eigenvalues(k) - i) / (dec.eigenvalues(k) + i);
  return dec.basis * mu.asDiagonal() * dec.basis.adjoint();
}

/// B = 2i (1 - U)^{-1} - i; requires 1 outside the spectrum of U.
inline GeneralMatrix cayley_inverse(const GeneralMatrix& u) {
  if (u.rows() != u.cols()) throw shape_error("cayley_inverse: input must be square");
  const Eigen::Index n = u.rows();
  const GeneralMatrix one_minus_u = GeneralMatrix::Identity(n, n) - u;
  Eigen::FullPivLU<GeneralMatrix> lu(one_minus_u);
  if (!lu.isInvertible()) throw domain_error("cayley_inverse: 1 is in the spectrum of U");
  const Complex i(0.0, 1.0);
  return 2.0 * i * lu.inverse() - i * GeneralMatrix::Identity(n, n);
}

/// The block-diagonal triple diag(A,B), diag(B,A), diag(R,R^*) turning a
/// quasi-commutator into a commutator of unitarily equivalent operators.
struct Dilation {
  HermitianMatrix a;
  HermitianMatrix b;
  GeneralMatrix r;
};

inline Dilation dilate_2x2(const HermitianMatrix& a, const HermitianMatrix& b, const GeneralMatrix& r) {
  const Eigen::Index n = a.dim();
  if (b.dim() != n || r.rows() != n || r.cols() != n) {
    throw shape_error("dilate_2x2: A, B and R must be square of equal dimension");
  }
  GeneralMatrix at = GeneralMatrix::Zero(2 * n, 2 * n);
  GeneralMatrix bt = GeneralMatrix::Zero(2 * n, 2 * n);
  GeneralMatrix rt = GeneralMatrix::Zero(2 * n, 2 * n);
  at.topLeftCorner(n, n) = a.matrix();
  at.bottomRightCorner(n, n) = b.matrix();
  bt.topLeftCorner(n, n) = b.matrix();
  bt.bottomRightCorner(n, n) = a.matrix();
  rt.topLeftCorner(n, n) = r;
  rt.bottomRightCorner(n, n) = r.adjoint();
  return {HermitianMatrix(at), HermitianMatrix(bt), rt};
}

/// The block swap [[0,1],[1,0]] conjugating diag(A,B) into diag(B,A).
inline GeneralMatrix swap_unitary(Eigen::Index n) {
  GeneralMatrix s = GeneralMatrix::Zero(2 * n, 2 * n);
  s.topRightCorner(n, n) = GeneralMatrix::Identity(n, n);
  s.bottomLeftCorner(n, n) = GeneralMatrix::Identity(n, n);
  return s;
}

}  // namespace opholder

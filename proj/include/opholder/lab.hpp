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
 * @brief Verifiers comparing both sides of the operator Hoelder inequalities
 *        on concrete matrices.
 *
 * Every verifier returns a VerificationRecord with ratio = lhs / rhs. When
 * rhs vanishes the ratio is 0 if lhs is negligible (such records are marked
 * degenerate and left out of campaign statistics) and +inf otherwise.
 */

#pragma once

#include "doi.hpp"
#include "errors.hpp"
#include "functions.hpp"
#include "norms.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace opholder {

struct VerificationRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  /// The constant the inequality is known to hold with, when the literature fixes one.
  std::optional<double> holds_with_constant;
  std::string inputs_digest;
  bool degenerate = false;      ///< rhs == 0
  bool counterexample = false;  ///< violates holds_with_constant beyond claim_tol, or rhs == 0 < lhs
  std::optional<double> companion;  ///< residual of the structural side check, when one exists
  std::optional<double> margin;     ///< submajorization margin, when one exists
};

inline constexpr double claim_tol = 1e-8;

namespace detail {

inline double input_scale(std::initializer_list<const GeneralMatrix*> ms) {
  double s = 0.0;
  for (const auto* m : ms) s = std::max(s, operator_norm(*m));
  return s;
}

inline void finalize(VerificationRecord& r, Eigen::Index dim, double scale) {
  if (r.rhs == 0.0) {
    r.degenerate = true;
    if (r.lhs <= 1e-12 * static_cast<double>(dim) * (1.0 + scale)) {
      r.ratio = 0.0;
    } else {
      r.ratio = std::numeric_limits<double>::infinity();
      r.counterexample = true;
    }
    return;
  }
  r.ratio = r.lhs / r.rhs;
  if (r.holds_with_constant && r.ratio > *r.holds_with_constant * (1.0 + claim_tol)) r.counterexample = true;
}

inline void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b, const char* who) {
  if (a.dim() != b.dim()) throw shape_error(std::string(who) + ": operands differ in dimension");
}

inline void require_positive(const HermitianMatrix& x, const char* who, const Tolerances& tol = {}) {
  const auto d = eig_hermitian(x, tol);
  if (d.eigenvalues(0) < -zero_threshold(d, tol)) {
    std::ostringstream os;
    os << who << ": operand has negative eigenvalue " << d.eigenvalues(0);
    throw domain_error(os.str());
  }
}

/// Singular values at rounding level (<= n eps mu_0) count as zero before the power is taken.
inline double theta_norm(const GeneralMatrix& diff, double theta, const NormSpec& spec) {
  const auto mu = singular_values(diff);
  const double floor = static_cast<double>(mu.size()) * std::numeric_limits<double>::epsilon() * mu[0];
  std::vector<double> v = mu.values();
  for (double& x : v) x = x <= floor ? 0.0 : std::pow(x, theta);
  return norm(SingularValueProfile(std::move(v)), spec);
}

inline GeneralMatrix apply(const ScalarFunction& f, const HermitianMatrix& a) {
  return apply_function([&f](double x) { return f(x); }, a).matrix();
}

inline double function_seminorm(const ScalarFunction& f, double theta, double p, std::optional<double> given,
                                const GridSpec& grid) {
  const double s = given ? *given : seminorm(f, d_of_p(p), theta, grid).value;
  if (!std::isfinite(s)) throw capability_error(f.name() + ": seminorm is infinite on the sample grid");
  return s;
}

inline std::string digest_dims(Eigen::Index n) { return "dim=" + std::to_string(n); }

}  // namespace detail

/// ||f(A) - f(B)||_p against ||f||_{S_{d(p),theta}} || |A - B|^theta ||_p.
inline VerificationRecord verify_main(const ScalarFunction& f, double theta, double p, const HermitianMatrix& A,
                                      const HermitianMatrix& B, std::optional<double> f_norm = {},
                                      const GridSpec& grid = {}) {
  detail::require_same_dim(A, B, "verify_main");
  const double s = detail::function_seminorm(f, theta, p, f_norm, grid);
  const NormSpec spec = Schatten{p};
  VerificationRecord r;
  r.name = "main";
  const GeneralMatrix diff = A.matrix() - B.matrix();
  r.lhs = norm(GeneralMatrix(detail::apply(f, A) - detail::apply(f, B)), spec);
  r.rhs = s * detail::theta_norm(diff, theta, spec);
  r.inputs_digest = detail::digest_dims(A.dim());
  if (p == 2.0 && theta == 0.5 && f.name() == "power:0.5") {
    const auto da = eig_hermitian(A), db = eig_hermitian(B);
    if (da.eigenvalues(0) >= -zero_threshold(da) && db.eigenvalues(0) >= -zero_threshold(db)) {
      r.holds_with_constant = 1.0;
    }
  }
  detail::finalize(r, A.dim(), detail::input_scale({&A.matrix(), &B.matrix()}));
  return r;
}

/// ||X^theta - Y^theta|| <= || |X - Y|^theta || for positive X, Y and fully symmetric norms.
inline VerificationRecord verify_bks(double theta, const NormSpec& spec, const HermitianMatrix& X,
                                     const HermitianMatrix& Y) {
  detail::require_same_dim(X, Y, "verify_bks");
  if (!is_fully_symmetric(spec)) throw parameter_error("verify_bks: norm must be fully symmetric");
  if (!(theta > 0.0 && theta < 1.0)) throw parameter_error("verify_bks: theta must be in (0,1)");
  detail::require_positive(X, "verify_bks");
  detail::require_positive(Y, "verify_bks");
  const auto pw = [theta](double l) { return std::pow(std::max(l, 0.0), theta); };
  VerificationRecord r;
  r.name = "bks";
  r.lhs = norm(GeneralMatrix(apply_function(pw, X).matrix() - apply_function(pw, Y).matrix()), spec);
  r.rhs = detail::theta_norm(X.matrix() - Y.matrix(), theta, spec);
  r.holds_with_constant = 1.0;
  r.inputs_digest = detail::digest_dims(X.dim());
  detail::finalize(r, X.dim(), detail::input_scale({&X.matrix(), &Y.matrix()}));
  return r;
}

/// Smallest c with mu(f(X) - f(Y))^p << c ||f||^p mu(|X - Y|^theta)^p; ratio = c.
inline VerificationRecord verify_submajorization(const ScalarFunction& f, double theta, double p,
                                                 const HermitianMatrix& X, const HermitianMatrix& Y,
                                                 std::optional<double> f_norm = {}, const GridSpec& grid = {}) {
  detail::require_same_dim(X, Y, "verify_submajorization");
  if (!(p > 0.0)) throw parameter_error("verify_submajorization: p must be > 0");
  const double s = detail::function_seminorm(f, theta, p, f_norm, grid);
  const auto lower = singular_values(GeneralMatrix(detail::apply(f, X) - detail::apply(f, Y))).pow(p);
  const auto upper = singular_values(GeneralMatrix(X.matrix() - Y.matrix())).pow(theta * p).scaled(std::pow(s, p));
  VerificationRecord r;
  r.name = "submaj";
  r.lhs = lower.sum();
  r.rhs = upper.sum();
  r.inputs_digest = detail::digest_dims(X.dim());
  r.margin = submajorizes(upper, lower).margin;
  detail::finalize(r, X.dim(), detail::input_scale({&X.matrix(), &Y.matrix()}));
  if (!r.degenerate) r.ratio = submajorization_constant(upper, lower);
  return r;
}

/// ||f(X) - f(Y)||_{E^(p)} against ||f|| || |X - Y|^theta ||_{E^(p)}.
inline VerificationRecord verify_symmetric(const ScalarFunction& f, double theta, const NormSpec& spec,
                                           const HermitianMatrix& X, const HermitianMatrix& Y,
                                           std::optional<double> f_norm = {}, const GridSpec& grid = {}) {
  detail::require_same_dim(X, Y, "verify_symmetric");
  if (!std::holds_alternative<PowerOf>(spec)) throw parameter_error("verify_symmetric: norm must be power:...");
  const double p = std::get<PowerOf>(spec).p;
  const double s = detail::function_seminorm(f, theta, p, f_norm, grid);
  VerificationRecord r;
  r.name = "symmetric";
  r.lhs = norm(GeneralMatrix(detail::apply(f, X) - detail::apply(f, Y)), spec);
  r.rhs = s * detail::theta_norm(X.matrix() - Y.matrix(), theta, spec);
  r.inputs_digest = detail::digest_dims(X.dim());
  detail::finalize(r, X.dim(), detail::input_scale({&X.matrix(), &Y.matrix()}));
  return r;
}

/// ||f||_{S_{d,1/theta}}^theta ||f^{-1}(X) - f^{-1}(Y)|| against || |X - Y|^theta ||, theta > 1.
/// The inequality bounds the ratio from below.
inline VerificationRecord verify_inverse(const ScalarFunction& f, double theta, const NormSpec& spec,
                                         const HermitianMatrix& X, const HermitianMatrix& Y,
                                         std::optional<double> f_norm = {}, const GridSpec& grid = {}) {
  detail::require_same_dim(X, Y, "verify_inverse");
  if (!(theta > 1.0)) throw parameter_error("verify_inverse: theta must be > 1");
  const double p = exponent_of(spec);
  const double s = detail::function_seminorm(f, 1.0 / theta, p, f_norm, grid);
  const auto dx = eig_hermitian(X), dy = eig_hermitian(Y);
  const auto inv = [&f](double y) { return invert(f, y); };
  const HermitianMatrix gx = apply_function(inv, dx), gy = apply_function(inv, dy);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* d : {&dx, &dy}) {
    for (Eigen::Index i = 0; i < d->dim(); ++i) {
      const double x = invert(f, d->eigenvalues(i));
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!strictly_monotone_on(f, lo, hi)) {
    std::ostringstream os;
    os << "verify_inverse: " << f.name() << " is not strictly monotone on [" << lo << ", " << hi << "]";
    throw domain_error(os.str());
  }
  VerificationRecord r;
  r.name = "inverse";
  r.lhs = std::pow(s, theta) * norm(GeneralMatrix(gx.matrix() - gy.matrix()), spec);
  r.rhs = detail::theta_norm(X.matrix() - Y.matrix(), theta, spec);
  r.inputs_digest = detail::digest_dims(X.dim());
  detail::finalize(r, X.dim(), detail::input_scale({&X.matrix(), &Y.matrix()}));
  return r;
}

/// ||sgn(X)|X|^theta - sgn(Y)|Y|^theta|| over || |X - Y|^theta ||, theta > 1; bounded below.
/// With `expm1_variant` the left side uses sgn(t)(e^{|t|} - 1).
inline VerificationRecord verify_reverse_power(double theta, const NormSpec& spec, const HermitianMatrix& X,
                                               const HermitianMatrix& Y, bool expm1_variant = false) {
  detail::require_same_dim(X, Y, "verify_reverse_power");
  if (!(theta > 1.0)) throw parameter_error("verify_reverse_power: theta must be > 1");
  const auto g = [theta, expm1_variant](double t) {
    const double a = std::abs(t);
    const double v = expm1_variant ? std::expm1(a) : std::pow(a, theta);
    return t < 0.0 ? -v : v;
  };
  VerificationRecord r;
  r.name = expm1_variant ? "reverse_expm1" : "reverse";
  r.lhs = norm(GeneralMatrix(apply_function(g, X).matrix() - apply_function(g, Y).matrix()), spec);
  r.rhs = detail::theta_norm(X.matrix() - Y.matrix(), theta, spec);
  r.inputs_digest = detail::digest_dims(X.dim());
  detail::finalize(r, X.dim(), detail::input_scale({&X.matrix(), &Y.matrix()}));
  return r;
}

/// ||[f(X), B]|| against ||f|| || |[X, B]|^theta || ||B||_inf^{1-theta}.
///
/// The companion compares ||U^* f(X) U - f(X)|| with ||f(U^* X U) - f(X)|| for the
/// Cayley transform U of the normalized Hermitian part of B.
inline VerificationRecord verify_commutator(const ScalarFunction& f, double theta, const NormSpec& spec,
                                            const HermitianMatrix& X, const GeneralMatrix& B,
                                            std::optional<double> f_norm = {}, const GridSpec& grid = {}) {
  if (B.rows() != X.dim() || B.cols() != X.dim()) throw shape_error("verify_commutator: B must match X");
  const double p = exponent_of(spec);
  const double s = detail::function_seminorm(f, theta, p, f_norm, grid);
  const GeneralMatrix fx = detail::apply(f, X);
  const double b_inf = operator_norm(B);
  VerificationRecord r;
  r.name = "commutator";
  r.lhs = norm(GeneralMatrix(fx * B - B * fx), spec);
  r.rhs = s * detail::theta_norm(X.matrix() * B - B * X.matrix(), theta, spec) * std::pow(b_inf, 1.0 - theta);
  r.inputs_digest = detail::digest_dims(X.dim());

  GeneralMatrix h = 0.5 * (B + B.adjoint());
  if (operator_norm(h) == 0.0) h = GeneralMatrix(Complex(0.0, -0.5) * (B - B.adjoint()));
  const double hn = operator_norm(h);
  if (hn > 0.0) {
    const GeneralMatrix u = cayley(HermitianMatrix(GeneralMatrix(h / hn)));
    const HermitianMatrix rotated(GeneralMatrix(u.adjoint() * X.matrix() * u));
    const double a = norm(GeneralMatrix(u.adjoint() * fx * u - fx), spec);
    const double c = norm(GeneralMatrix(detail::apply(f, rotated) - fx), spec);
    r.companion = std::abs(a - c) / (1.0 + std::max(a, c));
  } else {
    r.companion = 0.0;
  }
  detail::finalize(r, X.dim(), detail::input_scale({&X.matrix(), &B}));
  return r;
}

/// ||f(A)R - R f(B)|| against ||f|| || |AR - RB|^theta || ||R||_inf^{1-theta}.
///
/// The companion checks that the singular values of the 2x2 dilation
/// A~R~ - R~B~ are those of AR - RB, each repeated twice.
inline VerificationRecord verify_quasi_commutator(const ScalarFunction& f, double theta, const NormSpec& spec,
                                                  const HermitianMatrix& A, const HermitianMatrix& B,
                                                  const GeneralMatrix& R, std::optional<double> f_norm = {},
                                                  const GridSpec& grid = {}) {
  detail::require_same_dim(A, B, "verify_quasi_commutator");
  const double p = exponent_of(spec);
  const double s = detail::function_seminorm(f, theta, p, f_norm, grid);
  const GeneralMatrix z = A.matrix() * R - R * B.matrix();
  VerificationRecord r;
  r.name = "quasicommutator";
  r.lhs = norm(GeneralMatrix(detail::apply(f, A) * R - R * detail::apply(f, B)), spec);
  r.rhs = s * detail::theta_norm(z, theta, spec) * std::pow(operator_norm(R), 1.0 - theta);
  r.inputs_digest = detail::digest_dims(A.dim());

  const Dilation dl = dilate_2x2(A, B, R);
  const auto big = singular_values(GeneralMatrix(dl.a.matrix() * dl.r - dl.r * dl.b.matrix()));
  const auto small = singular_values(z);
  double gap = 0.0;
  for (std::size_t k = 0; k < big.size(); ++k) gap = std::max(gap, std::abs(big[k] - small[k / 2]));
  r.companion = gap / (1.0 + small[0]);
  detail::finalize(r, A.dim(), detail::input_scale({&A.matrix(), &B.matrix(), &R}));
  return r;
}

/// || |A| - |B| || over (||A + B|| ||A - B||)^{1/2} for arbitrary square A, B.
inline VerificationRecord verify_abs_map(const NormSpec& spec, const GeneralMatrix& A, const GeneralMatrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw shape_error("verify_abs_map: operands must be square of equal size");
  }
  VerificationRecord r;
  r.name = "absmap";
  r.lhs = norm(GeneralMatrix(abs_matrix(A).matrix() - abs_matrix(B).matrix()), spec);
  r.rhs = std::sqrt(norm(GeneralMatrix(A + B), spec) * norm(GeneralMatrix(A - B), spec));
  if (const auto* sp = std::get_if<Schatten>(&spec); sp && sp->p >= 2.0 && std::isfinite(sp->p)) {
    r.holds_with_constant = 1.0;
  }
  r.inputs_digest = detail::digest_dims(A.rows());
  detail::finalize(r, A.rows(), detail::input_scale({&A, &B}));
  return r;
}

/// |Z^theta X^theta|^p << |Z X|^{theta p}; ratio is the smallest admissible constant.
inline VerificationRecord verify_alt(const HermitianMatrix& X, const HermitianMatrix& Z, double theta, double p) {
  const auto rep = alt_check(X, Z, theta, p);
  const auto pw = [theta](double l) { return std::pow(std::max(l, 0.0), theta); };
  const auto upper = singular_values(GeneralMatrix(Z.matrix() * X.matrix())).pow(theta * p);
  const auto lower =
      singular_values(GeneralMatrix(apply_function(pw, Z).matrix() * apply_function(pw, X).matrix())).pow(p);
  VerificationRecord r;
  r.name = "alt";
  r.lhs = lower.sum();
  r.rhs = upper.sum();
  r.holds_with_constant = 1.0;
  r.margin = rep.margin;
  r.inputs_digest = detail::digest_dims(X.dim());
  detail::finalize(r, X.dim(), detail::input_scale({&X.matrix(), &Z.matrix()}));
  if (!r.degenerate) {
    r.ratio = submajorization_constant(upper, lower);
    r.counterexample = !rep.holds;
  }
  return r;
}

struct TelescopeStep {
  double x;
  ProjectionMatrix e;
};

/// A_m = B + sum_{k<m} x_k e_k: ||f(A_n) - f(B)||_p^p against sum_m ||f(A_{m+1}) - f(A_m)||_p^p.
///
/// The companion is the relative gap between || |A_n - B|^theta ||_p^p and
/// sum_k |x_k|^{theta p} rank(e_k).
inline VerificationRecord telescope_finite_rank(const ScalarFunction& f, double theta, double p,
                                                const HermitianMatrix& B, const std::vector<TelescopeStep>& steps) {
  if (!(p > 0.0 && p <= 1.0)) throw parameter_error("telescope_finite_rank: p must be in (0,1]");
  if (steps.empty()) throw parameter_error("telescope_finite_rank: no steps");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].e.dim() != B.dim()) throw shape_error("telescope_finite_rank: projection dimension mismatch");
    for (std::size_t j = i + 1; j < steps.size(); ++j) {
      if (operator_norm(GeneralMatrix(steps[i].e.matrix() * steps[j].e.matrix())) > 1e-10) {
        throw parameter_error("telescope_finite_rank: steps " + std::to_string(i) + " and " + std::to_string(j) +
                              " are not orthogonal");
      }
    }
  }
  const NormSpec spec = Schatten{p};
  std::vector<HermitianMatrix> chain{B};
  for (const auto& st : steps) chain.push_back(chain.back() + st.x * st.e.hermitian());
  std::vector<GeneralMatrix> fs;
  for (const auto& m : chain) fs.push_back(detail::apply(f, m));

  VerificationRecord r;
  r.name = "telescope";
  r.lhs = std::pow(norm(GeneralMatrix(fs.back() - fs.front()), spec), p);
  for (std::size_t m = 0; m + 1 < fs.size(); ++m) r.rhs += std::pow(norm(GeneralMatrix(fs[m + 1] - fs[m]), spec), p);
  r.holds_with_constant = 1.0;
  double expected = 0.0;
  for (const auto& st : steps) expected += std::pow(std::abs(st.x), theta * p) * static_cast<double>(st.e.rank());
  const double got = std::pow(detail::theta_norm(chain.back().matrix() - B.matrix(), theta, spec), p);
  r.companion = std::abs(got - expected) / (1.0 + expected);
  r.inputs_digest = detail::digest_dims(B.dim()) + ",steps=" + std::to_string(steps.size());
  detail::finalize(r, B.dim(), detail::input_scale({&B.matrix(), &chain.back().matrix()}));
  return r;
}

}  // namespace opholder

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
 * @brief Double operator integrals on matrices as Schur multipliers in the
 *        eigenbases, multiplier norm bounds and the dyadic symbol machinery.
 *
 * T_a^{A,B}(V) = U_A ([a(lambda_i, mu_j)] o (U_A^* V U_B)) U_B^*.
 */

#pragma once

#include "errors.hpp"
#include "functions.hpp"
#include "norms.hpp"
#include "numerics.hpp"
#include "randgen.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace opholder {

/// Eigenvalue ranges used when sampling spectra for a symbol.
///
/// Magnitudes are drawn in [lo, hi) (log-uniform when `log_scale`); a random
/// sign is applied when `signed_values`, and `negate` flips every draw.
struct SpectrumBand {
  double lo = -1.0;
  double hi = 1.0;
  bool log_scale = false;
  bool signed_values = false;
  bool negate = false;
};

struct SamplingBands {
  SpectrumBand s;
  SpectrumBand t;
};

/// a(lambda, mu) with a description and default sampling ranges.
struct BivariateSymbol {
  std::function<Complex(double, double)> eval;
  std::string description;
  SamplingBands bands;

  Complex operator()(double s, double t) const { return eval(s, t); }
};

namespace symbols {

inline BivariateSymbol constant(Complex c) {
  std::ostringstream os;
  os << "constant " << c.real();
  if (c.imag() != 0.0) os << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
  return {[c](double, double) { return c; }, os.str(), {}};
}

/// a(lambda, mu) = g(lambda).
inline BivariateSymbol left(std::function<Complex(double)> g, std::string description) {
  return {[g = std::move(g)](double s, double) { return g(s); }, std::move(description), {}};
}

/// a(lambda, mu) = g(mu).
inline BivariateSymbol right(std::function<Complex(double)> g, std::string description) {
  return {[g = std::move(g)](double, double t) { return g(t); }, std::move(description), {}};
}

/// (fDf)(lambda, mu).
inline BivariateSymbol divided_difference(const ScalarFunction& f) {
  return {[f](double s, double t) { return Complex(opholder::divided_difference(f, s, t), 0.0); },
          "divided difference of " + f.name(),
          {}};
}

/// a(s,t) chi_I(s) chi_J(t); a is evaluated only inside I x J.
inline BivariateSymbol restrict(const BivariateSymbol& a, const Interval& is, const Interval& it) {
  BivariateSymbol r;
  r.eval = [e = a.eval, is, it](double s, double t) {
    return (is.contains(s) && it.contains(t)) ? e(s, t) : Complex(0.0, 0.0);
  };
  r.description = a.description + " restricted";
  r.bands = a.bands;
  return r;
}

inline BivariateSymbol product(const BivariateSymbol& a, const BivariateSymbol& b) {
  return {[ea = a.eval, eb = b.eval](double s, double t) { return ea(s, t) * eb(s, t); },
          "(" + a.description + ") * (" + b.description + ")",
          a.bands};
}

/// (sigma_r a)(s, t) = a(s / r, t / r); bands scale with r.
inline BivariateSymbol dilated(const BivariateSymbol& a, double r) {
  if (!(r > 0.0)) throw parameter_error("dilated: r must be > 0");
  BivariateSymbol d;
  d.eval = [e = a.eval, r](double s, double t) { return e(s / r, t / r); };
  std::ostringstream os;
  os << "sigma_" << r << "(" << a.description << ")";
  d.description = os.str();
  d.bands = a.bands;
  for (SpectrumBand* b : {&d.bands.s, &d.bands.t}) {
    b->lo *= r;
    b->hi *= r;
  }
  return d;
}

inline bool in_abs(double x, double lo, double hi) {
  const double a = std::abs(x);
  return a >= lo && a < hi;
}

/// alpha(s,t) = 1/(s-t) chi_{[1/2,1)}(|s|) chi_{(0,1/4)}(|t|).
inline BivariateSymbol alpha() {
  BivariateSymbol a;
  a.eval = [](double s, double t) {
    if (!in_abs(s, 0.5, 1.0) || !(std::abs(t) > 0.0 && std::abs(t) < 0.25)) return Complex(0.0, 0.0);
    return Complex(1.0 / (s - t), 0.0);
  };
  a.description = "alpha";
  a.bands = {{0.5, 1.0, false, true, false}, {0.0, 0.25, false, true, false}};
  return a;
}

/// beta(s,t) = t/(t-s) chi_{[1/2,1)}(|s|) chi_{(2,inf)}(|t|).
inline BivariateSymbol beta() {
  BivariateSymbol b;
  b.eval = [](double s, double t) {
    if (!in_abs(s, 0.5, 1.0) || !(std::abs(t) > 2.0)) return Complex(0.0, 0.0);
    return Complex(t / (t - s), 0.0);
  };
  b.description = "beta";
  b.bands = {{0.5, 1.0, false, true, false}, {2.0, 64.0, true, true, false}};
  return b;
}

namespace detail {
inline BivariateSymbol b_symbol(double theta, double a, bool numerator_t) {
  if (!(theta > 0.0 && theta < 1.0)) throw parameter_error("b0/b1: theta must be in (0,1)");
  if (!(a > 0.0)) throw parameter_error("b0/b1: a must be > 0");
  BivariateSymbol b;
  b.eval = [theta, a, numerator_t](double s, double t) {
    if (!(s < -a) || !(t > 0.0)) return Complex(0.0, 0.0);
    return Complex(std::pow(std::abs(numerator_t ? t : s), theta) / (s - t), 0.0);
  };
  std::ostringstream os;
  os << (numerator_t ? "b1" : "b0") << "(theta=" << theta << ", a=" << a << ")";
  b.description = os.str();
  b.bands = {{a, 64.0 * a, true, false, true}, {a / 64.0, 64.0 * a, true, false, false}};
  return b;
}
}  // namespace detail

/// b0(s,t) = |s|^theta/(s-t) chi_{(-inf,-a) x (0,inf)}.
inline BivariateSymbol b0(double theta, double a) { return detail::b_symbol(theta, a, false); }
/// b1(s,t) = |t|^theta/(s-t) chi_{(-inf,-a) x (0,inf)}.
inline BivariateSymbol b1(double theta, double a) { return detail::b_symbol(theta, a, true); }

}  // namespace symbols

// ---------------------------------------------------------------------------
// Schur multiplication
// ---------------------------------------------------------------------------

/// T_a^{A,B}(V). Throws singularity_error naming the first pair where a is not finite.
inline GeneralMatrix schur_apply(const BivariateSymbol& a, const SpectralDecomposition& dec_a,
                                 const SpectralDecomposition& dec_b, const GeneralMatrix& v) {
  if (v.rows() != dec_a.dim() || v.cols() != dec_b.dim()) {
    throw shape_error("schur_apply: V is " + std::to_string(v.rows()) + "x" + std::to_string(v.cols()) +
                      ", spectra are " + std::to_string(dec_a.dim()) + " and " + std::to_string(dec_b.dim()));
  }
  GeneralMatrix m = dec_a.basis.adjoint() * v * dec_b.basis;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double s = dec_a.eigenvalues(i), t = dec_b.eigenvalues(j);
      const Complex w = a(s, t);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        std::ostringstream os;
        os << a.description << " is singular at (" << s << ", " << t << ")";
        throw singularity_error(os.str(), s, t);
      }
      m(i, j) *= w;
    }
  }
  return dec_a.basis * m * dec_b.basis.adjoint();
}

inline GeneralMatrix schur_apply(const BivariateSymbol& a, const HermitianMatrix& A, const HermitianMatrix& B,
                                 const GeneralMatrix& v) {
  return schur_apply(a, eig_hermitian(A), eig_hermitian(B), v);
}

namespace detail {

/// Eigenvector i of the decomposition lies in the range of P.
inline std::vector<bool> range_mask(const ProjectionMatrix& p, const SpectralDecomposition& dec) {
  if (p.dim() != dec.dim()) throw shape_error("projection and matrix dimensions differ");
  std::vector<bool> mask(static_cast<std::size_t>(dec.dim()));
  for (Eigen::Index i = 0; i < dec.dim(); ++i) {
    mask[static_cast<std::size_t>(i)] = (p.matrix() * dec.basis.col(i)).squaredNorm() > 0.5;
  }
  return mask;
}

}  // namespace detail

/// || T_{fDf}(p (A-B) q) - p (f(A) - f(B)) q ||_inf / (1 + ||A - B||_inf).
///
/// p and q must be spectral projections of A and B; fDf is evaluated only on
/// eigenpairs inside their ranges.
inline double doi_lipschitz_identity(const ScalarFunction& f, const HermitianMatrix& A, const HermitianMatrix& B,
                                     const ProjectionMatrix& p, const ProjectionMatrix& q) {
  if (A.dim() != B.dim()) throw shape_error("doi_lipschitz_identity: A and B differ in dimension");
  const auto da = eig_hermitian(A), db = eig_hermitian(B);
  const auto ma = detail::range_mask(p, da), mb = detail::range_mask(q, db);
  const GeneralMatrix diff = A.matrix() - B.matrix();
  GeneralMatrix m = da.basis.adjoint() * (p.matrix() * diff * q.matrix()) * db.basis;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (ma[static_cast<std::size_t>(i)] && mb[static_cast<std::size_t>(j)]) {
        m(i, j) *= divided_difference(f, da.eigenvalues(i), db.eigenvalues(j));
      } else {
        m(i, j) = 0.0;
      }
    }
  }
  const GeneralMatrix lhs = da.basis * m * db.basis.adjoint();
  const auto fv = [&f](double x) { return f(x); };
  const GeneralMatrix rhs =
      p.matrix() * (apply_function(fv, da).matrix() - apply_function(fv, db).matrix()) * q.matrix();
  return operator_norm(lhs - rhs) / (1.0 + operator_norm(diff));
}

// ---------------------------------------------------------------------------
// Bounds on the multiplier quasi-norm
// ---------------------------------------------------------------------------

/// Lower and (when available) upper bounds for ||a||_{M_p}.
struct MpBound {
  std::optional<double> upper;
  double lower = 0.0;
  std::string method;

  bool consistent() const { return !upper || lower <= *upper * (1.0 + 1e-8); }
};

/// a(s,t) = sum_n phi_n(s) psi_n(t), with sup-norms of every stored term.
///
/// When `psi_ratio` is set the omitted terms n >= size() satisfy
/// psi_sup[n] = psi_sup.back() * psi_ratio^{n - size() + 1} and
/// phi_sup[n] <= phi_tail_sup.
struct MultiplierDecomposition {
  std::vector<std::function<Complex(double)>> phi;
  std::vector<std::function<Complex(double)>> psi;
  std::vector<double> phi_sup;
  std::vector<double> psi_sup;
  std::optional<double> psi_ratio;
  double phi_tail_sup = 0.0;
  std::string description;

  std::size_t size() const noexcept { return phi_sup.size(); }

  Complex evaluate(double s, double t) const {
    Complex acc(0.0, 0.0);
    for (std::size_t n = 0; n < phi.size(); ++n) acc += phi[n](s) * psi[n](t);
    return acc;
  }
};

/// (sup_n phi_sup[n]) * (sum_n psi_sup[n]^p)^{1/p}; the geometric tail is added in closed form.
inline double decomposition_bound(const MultiplierDecomposition& dec, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw parameter_error("decomposition_bound: p must be in (0,1]");
  if (dec.phi_sup.size() != dec.psi_sup.size()) throw shape_error("decomposition_bound: sup vectors differ in length");
  if (dec.size() == 0) return 0.0;
  double phi_max = *std::max_element(dec.phi_sup.begin(), dec.phi_sup.end());
  double sum = 0.0;
  for (double s : dec.psi_sup) sum += std::pow(s, p);
  if (dec.psi_ratio) {
    const double r = std::pow(*dec.psi_ratio, p);
    if (!(r < 1.0)) return std::numeric_limits<double>::infinity();
    sum += std::pow(dec.psi_sup.back(), p) * r / (1.0 - r);
    phi_max = std::max(phi_max, dec.phi_tail_sup);
  }
  return phi_max * std::pow(sum, 1.0 / p);
}

namespace decompositions {

/// alpha(s,t) = sum_n [(1/s)(2s)^{-n} chi_{[1/2,1)}(|s|)] [(2t)^n chi_{(0,1/4)}(|t|)].
inline MultiplierDecomposition alpha(int terms = 64) {
  MultiplierDecomposition d;
  d.description = "alpha";
  for (int n = 0; n < terms; ++n) {
    d.phi.emplace_back([n](double s) {
      return symbols::in_abs(s, 0.5, 1.0) ? Complex(std::pow(2.0 * s, -n) / s, 0.0) : Complex(0.0, 0.0);
    });
    d.psi.emplace_back([n](double t) {
      return (std::abs(t) > 0.0 && std::abs(t) < 0.25) ? Complex(std::pow(2.0 * t, n), 0.0) : Complex(0.0, 0.0);
    });
    d.phi_sup.push_back(2.0);
    d.psi_sup.push_back(std::ldexp(1.0, -n));
  }
  d.psi_ratio = 0.5;
  d.phi_tail_sup = 2.0;
  return d;
}

/// beta(s,t) = sum_n [s^n chi_{[1/2,1)}(|s|)] [t^{-n} chi_{(2,inf)}(|t|)].
inline MultiplierDecomposition beta(int terms = 64) {
  MultiplierDecomposition d;
  d.description = "beta";
  for (int n = 0; n < terms; ++n) {
    d.phi.emplace_back([n](double s) {
      return symbols::in_abs(s, 0.5, 1.0) ? Complex(std::pow(s, n), 0.0) : Complex(0.0, 0.0);
    });
    d.psi.emplace_back([n](double t) {
      return std::abs(t) > 2.0 ? Complex(std::pow(t, -n), 0.0) : Complex(0.0, 0.0);
    });
    d.phi_sup.push_back(1.0);
    d.psi_sup.push_back(std::ldexp(1.0, -n));
  }
  d.psi_ratio = 0.5;
  d.phi_tail_sup = 1.0;
  return d;
}

}  // namespace decompositions

/// Closed-form alpha bound 2 (1 - 2^{-p})^{-1/p}.
inline double alpha_bound(double p) {
  return decomposition_bound(decompositions::alpha(1), std::min(p, 1.0));
}
/// Closed-form beta bound (1 - 2^{-p})^{-1/p}.
inline double beta_bound(double p) { return decomposition_bound(decompositions::beta(1), std::min(p, 1.0)); }

// ---------------------------------------------------------------------------
// Fourier-Sobolev route
// ---------------------------------------------------------------------------

/// A 2 pi-periodic symbol with mixed partials d^{m+n} a / dx^m dy^n up to total order `max_order`.
struct PeriodicSymbol {
  std::function<Complex(int, int, double, double)> partial;
  int max_order = 0;
  std::string description;

  Complex operator()(double x, double y) const { return partial(0, 0, x, y); }
};

namespace periodic {

inline PeriodicSymbol constant(Complex c) {
  return {[c](int m, int n, double, double) { return (m == 0 && n == 0) ? c : Complex(0.0, 0.0); }, 64,
          "periodic constant"};
}

/// a(x,y) = e^{ix}.
inline PeriodicSymbol exp_x() {
  return {[](int m, int n, double x, double) {
            if (n > 0) return Complex(0.0, 0.0);
            static const Complex i(0.0, 1.0);
            return std::pow(i, m) * std::exp(i * x);
          },
          64, "e^{ix}"};
}

/// (phi x phi) fDf, extended 2 pi-periodically from (0, pi]^2.
///
/// d_x^n d_y^m fDf(x,y) = int_0^1 t^n (1-t)^m f^{(1+n+m)}(t x + (1-t) y) dt.
inline PeriodicSymbol local(const ScalarFunction& f, const numerics::SmoothBump& bump, int order,
                            int nodes = 24) {
  if (order + 1 > f.max_order()) {
    throw capability_error(f.name() + ": local symbol of order " + std::to_string(order) + " needs derivatives to " +
                           std::to_string(order + 1));
  }
  if (order > bump.smoothness()) {
    throw capability_error("local symbol: bump is only C^" + std::to_string(bump.smoothness()));
  }
  const auto rule = numerics::gauss_legendre(nodes);
  auto dd = [f, rule](int n, int m, double x, double y) {
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double t = rule.nodes[q];
      acc += rule.weights[q] * std::pow(t, n) * std::pow(1.0 - t, m) * f.derivative(1 + n + m, t * x + (1.0 - t) * y);
    }
    return acc;
  };
  auto binom = [](int n, int r) {
    double b = 1.0;
    for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
  };
  PeriodicSymbol s;
  s.max_order = order;
  s.description = "(phi x phi) fDf for " + f.name();
  s.partial = [bump, dd, binom](int n, int m, double x, double y) {
    const auto [lo, hi] = bump.support();
    if (x <= lo || x >= hi || y <= lo || y >= hi) return Complex(0.0, 0.0);
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double px = bump.derivative(n - i, x);
      if (px == 0.0) continue;
      for (int j = 0; j <= m; ++j) {
        const double py = bump.derivative(m - j, y);
        if (py == 0.0) continue;
        acc += binom(n, i) * binom(m, j) * px * py * dd(i, j, x, y);
      }
    }
    return Complex(acc, 0.0);
  };
  return s;
}

}  // namespace periodic

/// c_{p,b} = (sum_{n != 0} |n|^{-pb})^{1/p} = (2 zeta(pb))^{1/p}.
inline double c_pb(double p, int b) {
  if (!(p > 0.0 && p <= 1.0)) throw parameter_error("c_pb: p must be in (0,1]");
  if (!(b > 1.0 / p)) throw parameter_error("c_pb: need b > 1/p for the series to converge");
  return std::pow(2.0 * numerics::zeta(p * b), 1.0 / p);
}

/// sqrt(pi^2 / 3) = (sum_{n != 0} n^{-2})^{1/2}.
inline const double embedding_constant = std::sqrt(std::numbers::pi * std::numbers::pi / 3.0);

struct QuadratureSpec {
  int points = 256;          ///< per axis, uniform on [-pi, pi)
  bool error_estimate = true;  ///< rerun on a grid half as fine
  bool sobolev_norm = true;    ///< also report sum_{m+n<=b+1} ||d^{m,n} a||_2
};

struct FourierSobolevReport {
  double bound = 0.0;
  double c_pb = 0.0;
  double a0_norm = 0.0;         ///< ||a_0||_2, a_0(x) = mean_y a(x,y)
  double a0_prime_norm = 0.0;   ///< ||a_0'||_2
  double db_norm = 0.0;         ///< ||d_y^b a||_2
  double d1db_norm = 0.0;       ///< ||d_x d_y^b a||_2
  double sobolev_norm = 0.0;    ///< ||a||_{W^{b+1,2}}, normalized measure
  double quadrature_error = 0.0;
};

namespace detail {

inline FourierSobolevReport fourier_sobolev_on_grid(const PeriodicSymbol& a, int b, int n, bool sobolev) {
  const double h = 2.0 * std::numbers::pi / n;
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = -std::numbers::pi + i * h;

  auto mean_sq = [&](int mx, int my) {
    double acc = 0.0;
    for (double x : grid) {
      for (double y : grid) acc += std::norm(a.partial(mx, my, x, y));
    }
    return acc / (static_cast<double>(n) * n);
  };

  FourierSobolevReport r;
  double a0 = 0.0, a0p = 0.0;
  for (double x : grid) {
    Complex m0(0.0, 0.0), m1(0.0, 0.0);
    for (double y : grid) {
      m0 += a.partial(0, 0, x, y);
      m1 += a.partial(1, 0, x, y);
    }
    a0 += std::norm(m0 / static_cast<double>(n));
    a0p += std::norm(m1 / static_cast<double>(n));
  }
  r.a0_norm = std::sqrt(a0 / n);
  r.a0_prime_norm = std::sqrt(a0p / n);
  r.db_norm = std::sqrt(mean_sq(0, b));
  r.d1db_norm = std::sqrt(mean_sq(1, b));
  if (sobolev) {
    for (int total = 0; total <= b + 1; ++total) {
      for (int mx = 0; mx <= total; ++mx) r.sobolev_norm += std::sqrt(mean_sq(mx, total - mx));
    }
  }
  return r;
}

}  // namespace detail

/// ||a_0||_2 + k ||a_0'||_2 + c_{p,b} (||d_y^b a||_2 + k ||d_x d_y^b a||_2), k = sqrt(pi^2/3),
/// with L_2 norms over the normalized torus evaluated by the periodic trapezoidal rule.
inline FourierSobolevReport fourier_sobolev_bound(const PeriodicSymbol& a, double p, int b,
                                                  const QuadratureSpec& quad = {}) {
  const double c = c_pb(p, b);
  if (a.max_order < b + 1) {
    throw capability_error(a.description + ": needs mixed partials to order " + std::to_string(b + 1));
  }
  if (quad.points < 8) throw parameter_error("fourier_sobolev_bound: grid too coarse");
  auto bound_of = [&](const FourierSobolevReport& r) {
    return r.a0_norm + embedding_constant * r.a0_prime_norm + c * (r.db_norm + embedding_constant * r.d1db_norm);
  };
  FourierSobolevReport r = detail::fourier_sobolev_on_grid(a, b, quad.points, quad.sobolev_norm);
  r.c_pb = c;
  r.bound = bound_of(r);
  if (quad.error_estimate) {
    const auto coarse = detail::fourier_sobolev_on_grid(a, b, quad.points / 2, false);
    r.quadrature_error = std::abs(r.bound - bound_of(coarse));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Empirical lower bounds
// ---------------------------------------------------------------------------

struct EmpiricalReport {
  double value = 0.0;     ///< max ||T_a(V)||_p / ||V||_p over the trials
  long trials = 0;
  long resampled = 0;     ///< draws rejected for singular symbol values
};

namespace detail {

inline double draw(const SpectrumBand& b, std::mt19937_64& rng) {
  double v;
  if (b.log_scale) {
    std::uniform_real_distribution<double> u(std::log(std::max(b.lo, 1e-300)), std::log(b.hi));
    v = std::exp(u(rng));
  } else {
    std::uniform_real_distribution<double> u(b.lo, b.hi);
    v = u(rng);
  }
  if (b.signed_values && std::bernoulli_distribution(0.5)(rng)) v = -v;
  return b.negate ? -v : v;
}

inline SpectralDecomposition diagonal_decomposition(const RealVector& ev) {
  SpectralDecomposition d;
  d.eigenvalues = ev;
  d.basis = GeneralMatrix::Identity(ev.size(), ev.size());
  return d;
}

}  // namespace detail

/// max over sampled diagonal (A, B) in the symbol's bands and Gaussian or rank-one V of
/// ||T_a(V)||_p / ||V||_p. Trial k uses seed.child(k), so the value is monotone in `trials`.
inline EmpiricalReport empirical_mp_lower(const BivariateSymbol& a, double p, long dim, long trials,
                                          const SeedState& seed, std::optional<SamplingBands> bands = {}) {
  if (trials < 1) throw parameter_error("empirical_mp_lower: trials must be >= 1");
  if (dim < 1) throw parameter_error("empirical_mp_lower: dim must be >= 1");
  if (!(p > 0.0)) throw parameter_error("empirical_mp_lower: p must be > 0");
  const SamplingBands sb = bands.value_or(a.bands);
  const NormSpec spec = Schatten{p};
  EmpiricalReport rep;
  rep.trials = trials;
  for (long k = 0; k < trials; ++k) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 100) throw domain_error("empirical_mp_lower: symbol singular on 100 consecutive draws");
      auto rng = seed.child(static_cast<std::uint64_t>(k)).child(static_cast<std::uint64_t>(attempt)).engine();
      RealVector s(dim), t(dim);
      for (long i = 0; i < dim; ++i) s(i) = detail::draw(sb.s, rng);
      for (long i = 0; i < dim; ++i) t(i) = detail::draw(sb.t, rng);
      GeneralMatrix v;
      if (std::bernoulli_distribution(0.5)(rng)) {
        v = ginibre(dim, 1, rng) * ginibre(1, dim, rng);
      } else {
        v = ginibre(dim, dim, rng);
      }
      try {
        const GeneralMatrix tv =
            schur_apply(a, detail::diagonal_decomposition(s), detail::diagonal_decomposition(t), v);
        const double den = norm(v, spec);
        if (den > 0.0) rep.value = std::max(rep.value, norm(tv, spec) / den);
        break;
      } catch (const singularity_error&) {
        ++rep.resampled;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Dyadic machinery
// ---------------------------------------------------------------------------

/// I_k = [2^{-k-1}, 2^{-k}).
inline Interval dyadic_band(int k) { return Interval::half_open(std::ldexp(1.0, -k - 1), std::ldexp(1.0, -k)); }

struct DyadicPair {
  BivariateSymbol g;  ///< fDf chi_{I_k}(s) chi_{(0,inf)}(t)
  BivariateSymbol h;  ///< fDf chi_{(0, 2^{-k-1})}(s) chi_{I_k}(t)
};

inline DyadicPair dyadic_symbols(const ScalarFunction& f, int k) {
  const auto dd = symbols::divided_difference(f);
  const double top = std::ldexp(1.0, -k), half = std::ldexp(1.0, -k - 1);
  DyadicPair out;
  out.g = symbols::restrict(dd, dyadic_band(k), Interval::open(0.0, std::numeric_limits<double>::infinity()));
  out.g.description = "g_" + std::to_string(k) + "[" + f.name() + "]";
  out.g.bands = {{half, top, false, false, false}, {top / 256.0, 16.0 * top, true, false, false}};
  out.h = symbols::restrict(dd, Interval::open(0.0, half), dyadic_band(k));
  out.h.description = "h_" + std::to_string(k) + "[" + f.name() + "]";
  out.h.bands = {{half / 256.0, half, true, false, false}, {half, top, false, false, false}};
  return out;
}

struct DyadicUpperReport {
  double upper = 0.0;     ///< bound on ||g_k||_{M_p}
  double alpha_part = 0.0;
  double beta_part = 0.0;
  double local_part = 0.0;
  double s0_norm = 0.0;   ///< ||sigma_{2^k} f||_{S_{0,theta}}
  double p_used = 0.0;
  int b = 0;
};

/// ||g_k||_{M_p} <= 2^k U with U^p = U_alpha^p + U_beta^p + U_local^p for F = sigma_{2^k} f:
/// U_alpha = 2^{1/p} ||F||_{S_0} alpha_bound, U_beta = 2^{1/p} ||F||_{S_0} beta_bound and
/// U_local the Fourier-Sobolev bound of (phi x phi) FDF. For p > 1 the p = 1 value is returned.
/// The Sobolev order b defaults to d(p) - 2.
inline DyadicUpperReport dyadic_upper_bound(const ScalarFunction& f, double theta, double p, int k,
                                            const numerics::SmoothBump& bump = numerics::SmoothBump::standard(),
                                            const QuadratureSpec& quad = {256, false, false}, const GridSpec& grid = {},
                                            std::optional<int> b = {}) {
  if (!(p > 0.0)) throw parameter_error("dyadic_upper_bound: p must be > 0");
  DyadicUpperReport r;
  r.p_used = std::min(p, 1.0);
  const double q = r.p_used;
  r.b = b.value_or(d_of_p(q) - 2);
  (void)c_pb(q, r.b);
  const ScalarFunction big_f = f.dilated(std::ldexp(1.0, k));
  r.s0_norm = seminorm(big_f, 0, theta, grid).value;
  const double two_root = std::pow(2.0, 1.0 / q);
  r.alpha_part = two_root * r.s0_norm * alpha_bound(q);
  r.beta_part = two_root * r.s0_norm * beta_bound(q);
  r.local_part = fourier_sobolev_bound(periodic::local(big_f, bump, r.b + 1), q, r.b, quad).bound;
  const double u = std::pow(std::pow(r.alpha_part, q) + std::pow(r.beta_part, q) + std::pow(r.local_part, q), 1.0 / q);
  r.upper = std::ldexp(u, k);
  return r;
}

struct ReconstructionReport {
  double residual = 0.0;  ///< ||sum - target||_inf / (1 + ||target||_inf)
  bool covered = true;    ///< every positive eigenvalue lies in the dyadic range
};

/// Compares sum_{k=klo}^{khi} (T_{g_k}(V_k) + T_{h_k}(W_k)) with s(A)_+ (f(A) - f(B)) s(B)_+,
/// V_k = p_k (A-B) Q_k, W_k = P_{k+1} (A-B) q_k.
inline ReconstructionReport representation_reconstruct(const ScalarFunction& f, const HermitianMatrix& A,
                                                       const HermitianMatrix& B, int klo, int khi,
                                                       const Tolerances& tol = {}) {
  if (A.dim() != B.dim()) throw shape_error("representation_reconstruct: A and B differ in dimension");
  if (klo > khi) throw parameter_error("representation_reconstruct: empty k range");
  const auto da = eig_hermitian(A, tol), db = eig_hermitian(B, tol);
  ReconstructionReport rep;
  const double lo = std::ldexp(1.0, -khi - 1), hi = std::ldexp(1.0, -klo);
  for (const auto* d : {&da, &db}) {
    const double z = zero_threshold(*d, tol);
    for (Eigen::Index i = 0; i < d->dim(); ++i) {
      const double l = d->eigenvalues(i);
      if (l > z && !(l >= lo && l < hi)) rep.covered = false;
    }
  }
  const GeneralMatrix diff = A.matrix() - B.matrix();
  GeneralMatrix sum = GeneralMatrix::Zero(A.dim(), A.dim());
  for (int k = klo; k <= khi; ++k) {
    const double top = std::ldexp(1.0, -k), half = std::ldexp(1.0, -k - 1);
    const auto pk = spectral_projection(da, dyadic_band(k));
    const auto qk = spectral_projection(db, dyadic_band(k));
    const auto big_qk = spectral_projection(db, Interval::open(0.0, top));
    const auto big_pk1 = spectral_projection(da, Interval::open(0.0, half));
    const auto sym = dyadic_symbols(f, k);
    if (pk.rank() > 0) sum += schur_apply(sym.g, da, db, pk.matrix() * diff * big_qk.matrix());
    if (qk.rank() > 0) sum += schur_apply(sym.h, da, db, big_pk1.matrix() * diff * qk.matrix());
  }
  const auto sa = support_parts(da, tol), sb = support_parts(db, tol);
  const auto fv = [&f](double x) { return f(x); };
  const GeneralMatrix target =
      sa.s_plus.matrix() * (apply_function(fv, da).matrix() - apply_function(fv, db).matrix()) * sb.s_plus.matrix();
  rep.residual = operator_norm(sum - target) / (1.0 + operator_norm(target));
  return rep;
}

/// |Z^theta X^theta|^p << |Z X|^{theta p} for positive semidefinite X, Z.
inline SubmajorizationReport alt_check(const HermitianMatrix& X, const HermitianMatrix& Z, double theta, double p,
                                       const Tolerances& tol = {}) {
  if (X.dim() != Z.dim()) throw shape_error("alt_check: X and Z differ in dimension");
  if (!(theta > 0.0 && theta < 1.0)) throw parameter_error("alt_check: theta must be in (0,1)");
  if (!(p > 0.0)) throw parameter_error("alt_check: p must be > 0");
  const auto dx = eig_hermitian(X, tol), dz = eig_hermitian(Z, tol);
  for (const auto* d : {&dx, &dz}) {
    const double z = zero_threshold(*d, tol);
    if (d->eigenvalues(0) < -z) {
      std::ostringstream os;
      os << "alt_check: negative eigenvalue " << d->eigenvalues(0);
      throw domain_error(os.str());
    }
  }
  const auto pw = [theta](double l) { return std::pow(std::max(l, 0.0), theta); };
  const GeneralMatrix xt = apply_function(pw, dx).matrix(), zt = apply_function(pw, dz).matrix();
  const auto upper = singular_values(GeneralMatrix(Z.matrix() * X.matrix())).pow(theta);
  const auto lower = singular_values(GeneralMatrix(zt * xt));
  return power_submajorizes(upper, lower, p);
}

}  // namespace opholder

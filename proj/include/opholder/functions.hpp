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
 * @brief Scalar functions with analytic derivatives, the weighted seminorm
 *        max_k sup_x |x|^{k-theta} |f^(k)(x)|, divided differences and d(p).
 */

#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace opholder {

/// f : R -> R with derivatives up to `max_order` away from the origin.
///
/// The derivative callback returns NaN where f^(k) does not exist (typically
/// x = 0 for |t|^theta-type entries).
class ScalarFunction {
 public:
  using Derivative = std::function<double(int, double)>;
  /// Closed-form sup_{x != 0} |x|^{k-theta} |f^(k)(x)| when known.
  using AnalyticSup = std::function<std::optional<double>(int, double)>;

  ScalarFunction(std::string name, Derivative derivative, int max_order, std::optional<double> theta_hint = {},
                 bool homogeneous = false, AnalyticSup analytic_sup = {})
      : name_(std::move(name)),
        derivative_(std::move(derivative)),
        max_order_(max_order),
        theta_hint_(theta_hint),
        homogeneous_(homogeneous),
        analytic_sup_(std::move(analytic_sup)) {}

  double operator()(double x) const { return derivative_(0, x); }

  double derivative(int k, double x) const {
    if (k < 0 || k > max_order_) {
      throw capability_error(name_ + ": derivative of order " + std::to_string(k) + " not available (max " +
                             std::to_string(max_order_) + ")");
    }
    return derivative_(k, x);
  }

  const std::string& name() const noexcept { return name_; }
  int max_order() const noexcept { return max_order_; }
  std::optional<double> theta_hint() const noexcept { return theta_hint_; }
  bool homogeneous() const noexcept { return homogeneous_; }

  std::optional<double> analytic_sup(int k, double theta) const {
    if (!analytic_sup_) return std::nullopt;
    return analytic_sup_(k, theta);
  }

  /// (sigma_r f)(x) = f(x / r).
  ScalarFunction dilated(double r) const {
    if (!(r > 0.0)) throw parameter_error("dilated: r must be > 0");
    auto d = derivative_;
    Derivative dd = [d, r](int k, double x) { return std::pow(r, -k) * d(k, x / r); };
    AnalyticSup sup;
    if (analytic_sup_) {
      auto a = analytic_sup_;
      sup = [a, r](int k, double theta) -> std::optional<double> {
        auto v = a(k, theta);
        if (!v) return std::nullopt;
        return std::pow(r, -theta) * *v;
      };
    }
    std::ostringstream os;
    os << "sigma_" << r << "(" << name_ << ")";
    return ScalarFunction(os.str(), std::move(dd), max_order_, theta_hint_, homogeneous_, std::move(sup));
  }

 private:
  std::string name_;
  Derivative derivative_;
  int max_order_;
  std::optional<double> theta_hint_;
  bool homogeneous_;
  AnalyticSup analytic_sup_;
};

namespace detail {

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline double value_at_zero(double right, double left) {
  if (std::isfinite(right) && std::isfinite(left) && right == left) return right;
  return std::numeric_limits<double>::quiet_NaN();
}

/// f(x) = g(|x|) from the derivatives of g on [0, infinity).
inline ScalarFunction::Derivative even_extension(std::function<double(int, double)> g) {
  return [g](int k, double x) {
    const double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
    if (x > 0.0) return g(k, x);
    if (x < 0.0) return sign_k * g(k, -x);
    if (k == 0) return g(0, 0.0);
    const double right = g(k, 0.0);
    return value_at_zero(right, sign_k * right);
  };
}

/// f(x) = sgn(x) g(|x|) with g(0) = 0.
inline ScalarFunction::Derivative odd_extension(std::function<double(int, double)> g) {
  return [g](int k, double x) {
    const double sign_k1 = (k % 2 == 0) ? -1.0 : 1.0;
    if (x > 0.0) return g(k, x);
    if (x < 0.0) return sign_k1 * g(k, -x);
    if (k == 0) return 0.0;
    const double right = g(k, 0.0);
    return value_at_zero(right, sign_k1 * right);
  };
}

/// prod_{j<k} (theta - j): the k-th derivative coefficient of x^theta.
inline double falling(double theta, int k) {
  double c = 1.0;
  for (int j = 0; j < k; ++j) c *= theta - j;
  return c;
}

inline void require_unit_theta(double theta, const char* who) {
  if (!(theta > 0.0 && theta < 1.0)) throw parameter_error(std::string(who) + ": theta must be in (0,1)");
}

}  // namespace detail

namespace catalog {

inline constexpr int kMaxOrder = 8;

/// |t|^theta.
inline ScalarFunction power(double theta) {
  detail::require_unit_theta(theta, "power");
  auto g = [theta](int k, double x) { return detail::falling(theta, k) * std::pow(x, theta - k); };
  auto sup = [theta](int k, double q) -> std::optional<double> {
    if (q != theta) return std::numeric_limits<double>::infinity();
    return std::abs(detail::falling(theta, k));
  };
  std::ostringstream os;
  os << "power:" << theta;
  return ScalarFunction(os.str(), detail::even_extension(g), kMaxOrder, theta, true, sup);
}

/// sgn(t) |t|^theta.
inline ScalarFunction signed_power(double theta) {
  detail::require_unit_theta(theta, "signed_power");
  auto g = [theta](int k, double x) { return detail::falling(theta, k) * std::pow(x, theta - k); };
  auto sup = [theta](int k, double q) -> std::optional<double> {
    if (q != theta) return std::numeric_limits<double>::infinity();
    return std::abs(detail::falling(theta, k));
  };
  std::ostringstream os;
  os << "signed_power:" << theta;
  return ScalarFunction(os.str(), detail::odd_extension(g), kMaxOrder, theta, true, sup);
}

namespace detail_log {
inline double g(int k, double x) {
  if (k == 0) return std::log1p(x);
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  return sign * opholder::detail::factorial(k - 1) / std::pow(1.0 + x, k);
}
inline std::optional<double> sup(int k, double theta) {
  if (k == 0) return std::nullopt;
  const double x = (k - theta) / theta;
  return std::pow(x, k - theta) * opholder::detail::factorial(k - 1) / std::pow(1.0 + x, k);
}
}  // namespace detail_log

/// log(|t| + 1).
inline ScalarFunction log1p() {
  return ScalarFunction("log1p", detail::even_extension(detail_log::g), kMaxOrder, std::nullopt, false,
                        detail_log::sup);
}

/// sgn(t) log(|t| + 1).
inline ScalarFunction signed_log1p() {
  return ScalarFunction("signed_log1p", detail::odd_extension(detail_log::g), kMaxOrder, std::nullopt, false,
                        detail_log::sup);
}

namespace detail_rational {
inline double g(double r, int k, double x) {
  if (k == 0) return x / (r + x);
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  return sign * opholder::detail::factorial(k) * r / std::pow(r + x, k + 1);
}
inline std::optional<double> sup(double r, int k, double theta) {
  if (k == 0) {
    const double x = r * (1.0 - theta) / theta;
    return std::pow(x, 1.0 - theta) / (r + x);
  }
  const double x = r * (k - theta) / (1.0 + theta);
  return std::pow(x, k - theta) * opholder::detail::factorial(k) * r / std::pow(r + x, k + 1);
}
}  // namespace detail_rational

/// |t| / (r + |t|).
inline ScalarFunction rational(double r) {
  if (!(r > 0.0)) throw parameter_error("rational: r must be > 0");
  std::ostringstream os;
  os << "rational:" << r;
  return ScalarFunction(
      os.str(), detail::even_extension([r](int k, double x) { return detail_rational::g(r, k, x); }), kMaxOrder,
      std::nullopt, false, [r](int k, double theta) { return detail_rational::sup(r, k, theta); });
}

/// t / (r + |t|).
inline ScalarFunction signed_rational(double r) {
  if (!(r > 0.0)) throw parameter_error("signed_rational: r must be > 0");
  std::ostringstream os;
  os << "signed_rational:" << r;
  return ScalarFunction(
      os.str(), detail::odd_extension([r](int k, double x) { return detail_rational::g(r, k, x); }), kMaxOrder,
      std::nullopt, false, [r](int k, double theta) { return detail_rational::sup(r, k, theta); });
}

/// sgn(t) (e^{|t|} - 1).
inline ScalarFunction signed_expm1() {
  auto g = [](int k, double x) { return k == 0 ? std::expm1(x) : std::exp(x); };
  return ScalarFunction("signed_expm1", detail::odd_extension(g), kMaxOrder);
}

/// t e^{-t^2}; f^(k) = (-1)^k H_{k+1}(t) e^{-t^2} / 2 with physicists' Hermite H.
inline ScalarFunction gauss() {
  auto d = [](int k, double x) {
    double h_prev = 1.0, h = 2.0 * x;  // H_0, H_1
    for (int n = 1; n <= k; ++n) {
      const double next = 2.0 * x * h - 2.0 * n * h_prev;
      h_prev = h;
      h = next;
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return 0.5 * sign * h * std::exp(-x * x);
  };
  return ScalarFunction("gauss", d, kMaxOrder);
}

/// f(t) = t.
inline ScalarFunction linear() {
  auto d = [](int k, double x) { return k == 0 ? x : (k == 1 ? 1.0 : 0.0); };
  auto sup = [](int k, double theta) -> std::optional<double> {
    if (theta != 1.0) return std::numeric_limits<double>::infinity();
    return k <= 1 ? 1.0 : 0.0;
  };
  return ScalarFunction("linear", d, kMaxOrder, 1.0, true, sup);
}

struct Entry {
  std::string name;
  bool takes_parameter;
  std::string parameter;  ///< meaning of the parameter, empty when none
  std::function<ScalarFunction(double)> make;
};

/// Named constructors; parameterized entries are written "name:value".
inline const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"power", true, "theta in (0,1)", [](double t) { return power(t); }},
      {"signed_power", true, "theta in (0,1)", [](double t) { return signed_power(t); }},
      {"log1p", false, "", [](double) { return log1p(); }},
      {"signed_log1p", false, "", [](double) { return signed_log1p(); }},
      {"rational", true, "r > 0", [](double r) { return rational(r); }},
      {"signed_rational", true, "r > 0", [](double r) { return signed_rational(r); }},
      {"signed_expm1", false, "", [](double) { return signed_expm1(); }},
      {"gauss", false, "", [](double) { return gauss(); }},
      {"linear", false, "", [](double) { return linear(); }},
  };
  return table;
}

/// Parses "power:0.5", "log1p", ... into a catalog function.
inline ScalarFunction make(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  for (const auto& e : entries()) {
    if (e.name != head) continue;
    if (e.takes_parameter != (colon != std::string::npos)) {
      throw parameter_error("function '" + spec + "': " +
                            (e.takes_parameter ? "expects a parameter (" + e.parameter + ")" : "takes no parameter"));
    }
    double value = 0.0;
    if (e.takes_parameter) {
      const std::string rest = spec.substr(colon + 1);
      char* end = nullptr;
      value = std::strtod(rest.c_str(), &end);
      if (rest.empty() || end != rest.c_str() + rest.size()) {
        throw parameter_error("function '" + spec + "': bad parameter '" + rest + "'");
      }
    }
    return e.make(value);
  }
  throw parameter_error("unknown function '" + spec + "'");
}

}  // namespace catalog

// ---------------------------------------------------------------------------
// Seminorm estimation
// ---------------------------------------------------------------------------

/// Log-spaced sample points over |x| in [min_abs, max_abs], both signs.
struct GridSpec {
  int points_per_sign = 2048;
  double min_abs = 1e-8;
  double max_abs = 1e8;
  bool refine = true;
};

struct SeminormEstimate {
  double value = 0.0;
  std::vector<double> per_order;
  std::string grid;
};

namespace detail {

inline double golden_max(const std::function<double(double)>& h, double a, double b, int iterations = 80) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = h(c), fd = h(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = h(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = h(d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace detail

/// Lower estimate of max_{k<=d} sup_{x != 0} |x|^{k-theta} |f^(k)(x)| by sampling.
inline SeminormEstimate seminorm(const ScalarFunction& f, int d, double theta, const GridSpec& grid = {}) {
  if (d > f.max_order()) {
    throw capability_error(f.name() + ": seminorm needs derivatives up to order " + std::to_string(d) +
                           ", available " + std::to_string(f.max_order()));
  }
  if (d < 0) throw parameter_error("seminorm: d must be >= 0");
  if (!(theta > 0.0 && theta <= 1.0)) throw parameter_error("seminorm: theta must be in (0,1]");
  if (grid.points_per_sign < 2 || !(grid.min_abs > 0.0) || !(grid.max_abs > grid.min_abs)) {
    throw parameter_error("seminorm: invalid grid");
  }
  const double u0 = std::log10(grid.min_abs), u1 = std::log10(grid.max_abs);
  const int n = grid.points_per_sign;
  const double du = (u1 - u0) / (n - 1);

  SeminormEstimate est;
  est.per_order.assign(static_cast<std::size_t>(d) + 1, 0.0);
  for (int k = 0; k <= d; ++k) {
    double best = 0.0;
    for (double sign : {1.0, -1.0}) {
      auto h = [&](double u) {
        const double ax = std::pow(10.0, u);
        const double v = std::pow(ax, k - theta) * std::abs(f.derivative(k, sign * ax));
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
      };
      int arg = 0;
      double top = -1.0;
      for (int i = 0; i < n; ++i) {
        const double v = h(u0 + i * du);
        if (v > top) {
          top = v;
          arg = i;
        }
      }
      if (grid.refine && std::isfinite(top)) {
        const double a = u0 + std::max(arg - 1, 0) * du;
        const double b = u0 + std::min(arg + 1, n - 1) * du;
        top = std::max(top, detail::golden_max(h, a, b));
      }
      best = std::max(best, top);
    }
    est.per_order[static_cast<std::size_t>(k)] = best;
  }
  est.value = *std::max_element(est.per_order.begin(), est.per_order.end());
  std::ostringstream os;
  os << n << " log-spaced points per sign over |x| in [" << grid.min_abs << ", " << grid.max_abs << "]"
     << (grid.refine ? ", golden-section refined" : "");
  est.grid = os.str();
  return est;
}

/// (2/theta) * ||f||_{S_{1,theta}}: a Hoelder constant for f.
inline double holder_bound(const ScalarFunction& f, double theta, const GridSpec& grid = {}) {
  if (f.max_order() < 1) throw capability_error(f.name() + ": holder_bound needs a first derivative");
  return 2.0 / theta * seminorm(f, 1, theta, grid).value;
}

inline constexpr double dd_switch = 1e-8;

/// (f(x) - f(y)) / (x - y), and f' at the midpoint once |x - y| <= dd_switch * max(|x|, |y|).
inline double divided_difference(const ScalarFunction& f, double x, double y, double switch_at = dd_switch) {
  const double gap = std::abs(x - y);
  if (x == y || gap <= switch_at * std::max(std::abs(x), std::abs(y))) {
    const double mid = x == y ? x : 0.5 * (x + y);
    const double v = f.derivative(1, mid);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "divided difference of " << f.name() << " is singular at (" << x << ", " << y << ")";
      throw singularity_error(os.str(), x, y);
    }
    return v;
  }
  return (f(x) - f(y)) / (x - y);
}

/// Least integer d > 1/p + 2 for p <= 1, and 4 for p > 1.
inline int d_of_p(double p) {
  if (!(p > 0.0)) throw parameter_error("d_of_p: p must be > 0");
  if (p > 1.0) return 4;
  return static_cast<int>(std::floor(1.0 / p + 2.0)) + 1;
}

// ---------------------------------------------------------------------------
// Dyadic scalar series
// ---------------------------------------------------------------------------

struct ScalarSumResult {
  double lhs = 0.0;           ///< truncated series
  double rhs_constant = 0.0;  ///< 2^{q(1-theta)} (1/(1-2^{q(theta-1)}) + 1/(1-2^{-q theta}))
  double tail_bound = 0.0;    ///< certified bound on the omitted terms
  long terms = 0;
};

/// sum_{l in Z} 2^{q l (1-theta)} min(alpha, 2^{1-l})^q, summed around the crossover
/// index until both geometric tails fall below `rel_tail` of the partial sum.
inline ScalarSumResult dyadic_scalar_sum(double theta, double q, double alpha, double rel_tail = 1e-13) {
  if (!(theta > 0.0 && theta < 1.0)) throw parameter_error("dyadic_scalar_sum: theta must be in (0,1)");
  if (!(q > 0.0) || !std::isfinite(q)) throw parameter_error("dyadic_scalar_sum: q must be > 0");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw parameter_error("dyadic_scalar_sum: alpha must be > 0");

  // m: the largest l with alpha <= 2^{1-l}.
  long m = static_cast<long>(std::floor(1.0 - std::log2(alpha)));
  while (alpha > std::ldexp(1.0, static_cast<int>(1 - m))) --m;
  while (alpha <= std::ldexp(1.0, static_cast<int>(-m))) ++m;

  const double low_ratio = std::exp2(-q * (1.0 - theta));
  const double high_ratio = std::exp2(-q * theta);
  auto term = [&](long l) {
    const double cap = std::min(alpha, std::ldexp(1.0, static_cast<int>(1 - l)));
    return std::exp2(q * static_cast<double>(l) * (1.0 - theta)) * std::pow(cap, q);
  };
  // Remainders: sum_{l < lo} alpha^q 2^{q l (1-theta)} and sum_{l > hi} 2^q 2^{-q l theta}.
  auto lower_tail = [&](long lo) {
    return std::pow(alpha, q) * std::exp2(q * static_cast<double>(lo - 1) * (1.0 - theta)) / (1.0 - low_ratio);
  };
  auto upper_tail = [&](long hi) {
    return std::exp2(q) * std::exp2(-q * static_cast<double>(hi + 1) * theta) / (1.0 - high_ratio);
  };

  ScalarSumResult r;
  long lo = m, hi = m + 1;
  double sum = term(m) + term(m + 1);
  r.terms = 2;
  for (int guard = 0; guard < 100000; ++guard) {
    const double lt = lower_tail(lo), ut = upper_tail(hi);
    if (lt <= rel_tail * sum && ut <= rel_tail * sum) {
      r.tail_bound = lt + ut;
      break;
    }
    if (lt > rel_tail * sum) sum += term(--lo), ++r.terms;
    if (ut > rel_tail * sum) sum += term(++hi), ++r.terms;
  }
  r.lhs = sum;
  r.rhs_constant = std::exp2(q * (1.0 - theta)) *
                   (1.0 / (1.0 - std::exp2(q * (theta - 1.0))) + 1.0 / (1.0 - std::exp2(-q * theta)));
  return r;
}

// ---------------------------------------------------------------------------
// Inversion of monotone functions
// ---------------------------------------------------------------------------

/// f^{-1}(y) by bisection to an absolute width of tol * (1 + |x|).
inline double invert(const ScalarFunction& f, double y, double tol = 1e-12) {
  double lo = -1.0, hi = 1.0;
  const bool increasing = f(hi) >= f(lo);
  auto below = [&](double x) { return increasing ? f(x) <= y : f(x) >= y; };
  while (!below(lo) && lo > -1e300) lo *= 2.0;
  while (below(hi) && hi < 1e300) hi *= 2.0;
  if (!below(lo) || below(hi)) {
    std::ostringstream os;
    os << "invert: " << y << " is outside the range of " << f.name();
    throw domain_error(os.str());
  }
  for (int it = 0; it < 400 && hi - lo > tol * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Strict monotonicity of f on [a, b] checked on `samples` equispaced points.
inline bool strictly_monotone_on(const ScalarFunction& f, double a, double b, int samples = 512) {
  if (!(b > a)) return true;
  int direction = 0;
  double prev = f(a);
  for (int i = 1; i < samples; ++i) {
    const double v = f(a + (b - a) * i / (samples - 1));
    const int s = v > prev ? 1 : (v < prev ? -1 : 0);
    if (s == 0 || (direction != 0 && s != direction)) return false;
    direction = s;
    prev = v;
  }
  return true;
}

}  // namespace opholder

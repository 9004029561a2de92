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
 * @brief Singular value profiles, unitarily invariant quasi-norms and submajorization.
 *
 * Every norm here is a function of the decreasing rearrangement mu(X) of the
 * singular values, the matrix form of the generalised singular value function
 * mu(t; X) = values[floor(t)].
 */

#pragma once

#include "errors.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace opholder {

/// Non-increasing, non-negative singular values.
class SingularValueProfile {
 public:
  SingularValueProfile() = default;

  /// Sorts the input; rejects negative or non-finite entries.
  explicit SingularValueProfile(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw domain_error("SingularValueProfile: entries must be finite and >= 0");
    }
    std::sort(values_.begin(), values_.end(), std::greater<>());
  }

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t k) const { return k < values_.size() ? values_[k] : 0.0; }

  /// mu(t) as a right-continuous step function on [0, infinity).
  double mu(double t) const {
    if (t < 0.0) throw parameter_error("mu: t must be >= 0");
    const auto k = static_cast<std::size_t>(std::floor(t));
    return (*this)[k];
  }

  /// int_0^t mu(s) ds; the last step is integrated linearly.
  double integral(double t) const {
    if (t < 0.0) throw parameter_error("integral: t must be >= 0");
    double acc = 0.0;
    const auto whole = static_cast<std::size_t>(std::floor(t));
    for (std::size_t k = 0; k < std::min(whole, values_.size()); ++k) acc += values_[k];
    return acc + (t - static_cast<double>(whole)) * (*this)[whole];
  }

  /// Entrywise power; p > 0.
  SingularValueProfile pow(double p) const {
    if (!(p > 0.0)) throw parameter_error("SingularValueProfile::pow: exponent must be > 0");
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), [p](double v) { return std::pow(v, p); });
    return SingularValueProfile(std::move(out));
  }

  SingularValueProfile scaled(double c) const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), [c](double v) { return c * v; });
    return SingularValueProfile(std::move(out));
  }

  double sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

 private:
  std::vector<double> values_;
};

inline SingularValueProfile singular_values(const GeneralMatrix& x) {
  if (x.size() == 0) return SingularValueProfile{};
  Eigen::JacobiSVD<GeneralMatrix> svd(x);
  const auto& s = svd.singularValues();
  return SingularValueProfile(std::vector<double>(s.data(), s.data() + s.size()));
}

/// For Hermitian input the singular values are the absolute eigenvalues.
inline SingularValueProfile singular_values(const HermitianMatrix& x) {
  Eigen::SelfAdjointEigenSolver<GeneralMatrix> solver(x.matrix(), Eigen::EigenvaluesOnly);
  std::vector<double> v(static_cast<std::size_t>(x.dim()));
  for (Eigen::Index i = 0; i < x.dim(); ++i) v[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()(i));
  return SingularValueProfile(std::move(v));
}

/// d(t) = #{k : values[k] > t}.
inline long distribution_function(const SingularValueProfile& profile, double t) {
  if (t < 0.0) throw parameter_error("distribution_function: t must be >= 0");
  return static_cast<long>(std::count_if(profile.values().begin(), profile.values().end(),
                                         [t](double v) { return v > t; }));
}

// ---------------------------------------------------------------------------
// Norm specifications
// ---------------------------------------------------------------------------

struct Schatten {
  double p;  ///< in (0, infinity]
};
struct WeakLp {
  double p;  ///< in (0, infinity)
};
struct KyFan {
  long k;  ///< >= 1; values above the dimension act as the trace norm
};

/// Fully symmetric norms admissible as the base of a p-th power space.
using SymmetricBase = std::variant<Schatten, KyFan>;

/// ||X||_{E^(p)} = || |X|^p ||_E^{1/p}.
struct PowerOf {
  SymmetricBase base;
  double p;
};

using NormSpec = std::variant<Schatten, WeakLp, KyFan, PowerOf>;

namespace detail {

inline void validate_base(const SymmetricBase& base) {
  if (const auto* s = std::get_if<Schatten>(&base)) {
    if (!(s->p >= 1.0)) throw parameter_error("PowerOf: Schatten base needs p >= 1 to be fully symmetric");
  } else if (std::get<KyFan>(base).k < 1) {
    throw parameter_error("KyFan: k must be >= 1");
  }
}

inline double schatten_of(std::span<const double> mu, double p) {
  if (!(p > 0.0)) throw parameter_error("Schatten: p must be > 0");
  if (mu.empty()) return 0.0;
  if (std::isinf(p)) return mu[0];
  // Scale by the largest entry so small p does not underflow.
  const double top = mu[0];
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : mu) acc += std::pow(v / top, p);
  return top * std::pow(acc, 1.0 / p);
}

inline double kyfan_of(std::span<const double> mu, long k) {
  if (k < 1) throw parameter_error("KyFan: k must be >= 1");
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(k), mu.size());
  return std::accumulate(mu.begin(), mu.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
}

inline double weak_of(std::span<const double> mu, double p) {
  if (!(p > 0.0) || std::isinf(p)) throw parameter_error("WeakLp: p must be in (0, infinity)");
  double best = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    best = std::max(best, std::pow(static_cast<double>(k + 1), 1.0 / p) * mu[k]);
  }
  return best;
}

inline double base_of(std::span<const double> mu, const SymmetricBase& base) {
  if (const auto* s = std::get_if<Schatten>(&base)) return schatten_of(mu, s->p);
  return kyfan_of(mu, std::get<KyFan>(base).k);
}

}  // namespace detail

/// Norm of a singular value profile.
inline double norm(const SingularValueProfile& mu, const NormSpec& spec) {
  const std::span<const double> v(mu.values());
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Schatten>) {
          return detail::schatten_of(v, s.p);
        } else if constexpr (std::is_same_v<T, WeakLp>) {
          return detail::weak_of(v, s.p);
        } else if constexpr (std::is_same_v<T, KyFan>) {
          return detail::kyfan_of(v, s.k);
        } else {
          detail::validate_base(s.base);
          if (!(s.p > 0.0) || std::isinf(s.p)) throw parameter_error("PowerOf: p must be in (0, infinity)");
          const auto powered = mu.pow(s.p);
          return std::pow(detail::base_of(std::span<const double>(powered.values()), s.base), 1.0 / s.p);
        }
      },
      spec);
}

inline double norm(const GeneralMatrix& x, const NormSpec& spec) { return norm(singular_values(x), spec); }
inline double norm(const HermitianMatrix& x, const NormSpec& spec) { return norm(singular_values(x), spec); }

/// Smallest K with ||X + Y|| <= K (||X|| + ||Y||).
inline double modulus_of_concavity(const NormSpec& spec) {
  const auto power_k = [](double q) { return std::max(std::pow(2.0, 1.0 / q - 1.0), 1.0); };
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Schatten>) {
          return std::isinf(s.p) ? 1.0 : power_k(s.p);
        } else if constexpr (std::is_same_v<T, WeakLp>) {
          // mu_{2m}(X+Y) <= mu_m(X) + mu_m(Y) with the (k+1)^{1/p} weights.
          return std::pow(2.0, 1.0 / s.p);
        } else if constexpr (std::is_same_v<T, KyFan>) {
          return 1.0;
        } else {
          return power_k(s.p);
        }
      },
      spec);
}

/// True for norms monotone under submajorization.
inline bool is_fully_symmetric(const NormSpec& spec) {
  if (const auto* s = std::get_if<Schatten>(&spec)) return s->p >= 1.0;
  return std::holds_alternative<KyFan>(spec);
}

/// The quasi-norm exponent: Schatten q, weak p, PowerOf p, and 1 for Ky Fan.
inline double exponent_of(const NormSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KyFan>) {
          return 1.0;
        } else {
          return s.p;
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Submajorization
// ---------------------------------------------------------------------------

struct SubmajorizationReport {
  bool holds = true;
  long worst_index = 0;
  double margin = 0.0;  ///< min_k (U_k - L_k) / scale over the partial sums
};

inline constexpr double submaj_tol = 1e-10;

/// Does `upper` submajorize `lower`, i.e. sum_{i<=k} lower_i <= sum_{i<=k} upper_i for every k?
inline SubmajorizationReport submajorizes(const SingularValueProfile& upper, const SingularValueProfile& lower,
                                          double tol = submaj_tol) {
  const std::size_t n = std::max(upper.size(), lower.size());
  const double scale = std::max(upper.sum(), lower.sum());
  SubmajorizationReport r;
  if (n == 0) return r;
  double su = 0.0, sl = 0.0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    su += upper[k];
    sl += lower[k];
    const double gap = scale > 0.0 ? (su - sl) / scale : 0.0;
    if (gap < worst) {
      worst = gap;
      r.worst_index = static_cast<long>(k);
    }
  }
  r.margin = worst;
  r.holds = r.margin >= -tol;
  return r;
}

inline SubmajorizationReport power_submajorizes(const SingularValueProfile& upper, const SingularValueProfile& lower,
                                                double p, double tol = submaj_tol) {
  if (!(p > 0.0)) throw parameter_error("power_submajorizes: p must be > 0");
  return submajorizes(upper.pow(p), lower.pow(p), tol);
}

/// Smallest c >= 0 with lower << c * upper: max over k of the partial-sum ratios.
/// Returns +infinity when some lower partial sum is positive while the upper one vanishes.
inline double submajorization_constant(const SingularValueProfile& upper, const SingularValueProfile& lower) {
  const std::size_t n = std::max(upper.size(), lower.size());
  const double floor = 1e-300;
  double su = 0.0, sl = 0.0, best = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    su += upper[k];
    sl += lower[k];
    if (sl <= floor) continue;
    if (su <= floor) return std::numeric_limits<double>::infinity();
    best = std::max(best, sl / su);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Textual form
// ---------------------------------------------------------------------------

/// Parse failure with the 0-based character position of the offending token.
class norm_parse_error : public parameter_error {
 public:
  norm_parse_error(const std::string& what, std::size_t position)
      : parameter_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

struct NormLexer {
  const std::string& text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }

  /// Next ':'-delimited token and its start position.
  std::pair<std::string, std::size_t> token() {
    if (done()) throw norm_parse_error("norm spec '" + text + "': unexpected end", pos);
    const std::size_t start = pos;
    const std::size_t end = text.find(':', pos);
    const std::size_t stop = end == std::string::npos ? text.size() : end;
    std::string t = text.substr(start, stop - start);
    pos = end == std::string::npos ? text.size() : end + 1;
    if (t.empty()) throw norm_parse_error("norm spec '" + text + "': empty field", start);
    return {t, start};
  }

  double number(bool allow_inf) {
    const auto [t, at] = token();
    if (allow_inf && (t == "inf" || t == "infinity")) return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v)) {
      const bool parsed = end == t.c_str() + t.size();
      throw norm_parse_error("norm spec '" + text + "': expected a finite number, got '" + t + "'",
                             parsed ? at : at + static_cast<std::size_t>(end - t.c_str()));
    }
    if (!(v > 0.0)) throw norm_parse_error("norm spec '" + text + "': exponent must be > 0", at);
    return v;
  }

  long integer() {
    const auto [t, at] = token();
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) {
      throw norm_parse_error("norm spec '" + text + "': expected an integer, got '" + t + "'",
                             at + static_cast<std::size_t>(end - t.c_str()));
    }
    if (v < 1) throw norm_parse_error("norm spec '" + text + "': k must be >= 1", at);
    return v;
  }
};

}  // namespace detail

/// Grammar: "schatten:p" (p may be "inf"), "weak:p", "kyfan:k",
/// "power:schatten:q:p" and "power:kyfan:k:p".
inline NormSpec parse_norm_spec(const std::string& text) {
  detail::NormLexer lex{text};
  const auto [head, at] = lex.token();
  NormSpec out;
  if (head == "schatten") {
    out = Schatten{lex.number(true)};
  } else if (head == "weak") {
    out = WeakLp{lex.number(false)};
  } else if (head == "kyfan") {
    out = KyFan{lex.integer()};
  } else if (head == "power") {
    const auto [base, base_at] = lex.token();
    SymmetricBase b;
    if (base == "schatten") {
      const std::size_t q_at = lex.pos;
      const double q = lex.number(true);
      if (q < 1.0) throw norm_parse_error("norm spec '" + text + "': a Schatten base needs q >= 1", q_at);
      b = Schatten{q};
    } else if (base == "kyfan") {
      b = KyFan{lex.integer()};
    } else {
      throw norm_parse_error("norm spec '" + text + "': base must be schatten or kyfan, got '" + base + "'", base_at);
    }
    out = PowerOf{b, lex.number(false)};
  } else {
    throw norm_parse_error("norm spec '" + text + "': unknown family '" + head + "'", at);
  }
  if (!lex.done()) throw norm_parse_error("norm spec '" + text + "': trailing input", lex.pos);
  return out;
}

namespace detail {
inline std::string format_number(double v) {
  if (std::isinf(v)) return "inf";
  // Shortest of 15..17 significant digits that reads back exactly.
  for (int digits = 15;; ++digits) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    if (digits == 17 || std::strtod(os.str().c_str(), nullptr) == v) return os.str();
  }
}
}  // namespace detail

inline std::string format_norm_spec(const NormSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Schatten>) {
          return "schatten:" + detail::format_number(s.p);
        } else if constexpr (std::is_same_v<T, WeakLp>) {
          return "weak:" + detail::format_number(s.p);
        } else if constexpr (std::is_same_v<T, KyFan>) {
          return "kyfan:" + std::to_string(s.k);
        } else {
          std::string base;
          if (const auto* b = std::get_if<Schatten>(&s.base)) {
            base = "schatten:" + detail::format_number(b->p);
          } else {
            base = "kyfan:" + std::to_string(std::get<KyFan>(s.base).k);
          }
          return "power:" + base + ":" + detail::format_number(s.p);
        }
      },
      spec);
}

}  // namespace opholder

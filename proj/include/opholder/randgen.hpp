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
 * @brief Seeded matrix ensembles: Gaussian Hermitian, Haar-rotated spectra,
 *        positive pairs, rank-r differences, commuting pairs and contractions.
 */

#pragma once

#include "errors.hpp"
#include "spectral.hpp"

#include <Eigen/QR>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace opholder {

/// One SplitMix64 step.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// A root seed plus a path (cell, trial, ...); the engine seed is a pure function of both.
struct SeedState {
  std::uint64_t root = 0;
  std::vector<std::uint64_t> path;

  SeedState child(std::uint64_t index) const {
    SeedState s = *this;
    s.path.push_back(index);
    return s;
  }

  std::uint64_t derive() const noexcept {
    std::uint64_t h = splitmix64(root);
    for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
    return h;
  }

  std::mt19937_64 engine() const { return std::mt19937_64(derive()); }

  std::string digest() const {
    std::ostringstream os;
    os << root;
    for (std::uint64_t p : path) os << '/' << p;
    return os.str();
  }

  friend bool operator==(const SeedState&, const SeedState&) = default;
};

// ---------------------------------------------------------------------------
// Primitive draws
// ---------------------------------------------------------------------------

/// i.i.d. standard complex Gaussian entries, E|z|^2 = 1.
inline GeneralMatrix ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  GeneralMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = Complex(s * re, s * im);
    }
  }
  return g;
}

/// Haar unitary: QR of a Ginibre matrix with the phases of diag(R) moved into Q.
inline GeneralMatrix haar_unitary(Eigen::Index n, std::mt19937_64& rng) {
  if (n < 1) throw parameter_error("haar_unitary: dim must be >= 1");
  const GeneralMatrix z = ginibre(n, n, rng);
  Eigen::HouseholderQR<GeneralMatrix> qr(z);
  GeneralMatrix q = qr.householderQ() * GeneralMatrix::Identity(n, n);
  const GeneralMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

inline HermitianMatrix gaussian_hermitian(Eigen::Index n, double scale, std::mt19937_64& rng) {
  const GeneralMatrix g = ginibre(n, n, rng);
  return HermitianMatrix(GeneralMatrix(scale * 0.5 * (g + g.adjoint())));
}

inline HermitianMatrix rotate(const RealVector& eigenvalues, const GeneralMatrix& u) {
  return HermitianMatrix(GeneralMatrix(u * eigenvalues.cast<Complex>().asDiagonal() * u.adjoint()));
}

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

namespace ensemble {

struct GaussianHermitian {
  long dim = 4;
  double scale = 1.0;
};
struct FixedSpectrum {
  std::vector<double> eigenvalues;
  bool haar_basis = true;
};
/// Two positive semidefinite matrices, eigenvalues uniform in [lo, hi], independent Haar bases.
struct PositivePair {
  long dim = 4;
  double lo = 0.0;
  double hi = 1.0;
};
/// B Gaussian Hermitian and A = B + sum_k x_k u_k u_k^* over a Haar frame, |x_k| log-uniform in [lo, hi].
struct RankRDifference {
  long dim = 4;
  long r = 1;
  double lo = 1e-3;
  double hi = 1.0;
};
/// Gaussian eigenvalue per block, repeated by multiplicity, Haar basis.
struct DegenerateSpectrum {
  std::vector<long> multiplicities;
};
/// Two Gaussian spectra in a common Haar basis.
struct CommutingPair {
  long dim = 4;
};
/// Ginibre matrix scaled to operator norm 1.
struct Contraction {
  long dim = 4;
};
struct GeneralGaussian {
  long dim = 4;
};

}  // namespace ensemble

using EnsembleSpec =
    std::variant<ensemble::GaussianHermitian, ensemble::FixedSpectrum, ensemble::PositivePair,
                 ensemble::RankRDifference, ensemble::DegenerateSpectrum, ensemble::CommutingPair,
                 ensemble::Contraction, ensemble::GeneralGaussian>;

inline const char* ensemble_kind(const EnsembleSpec& spec) {
  static constexpr const char* names[] = {"gaussian_hermitian", "fixed_spectrum", "positive_pair",
                                          "rank_r_difference",  "degenerate_spectrum", "commuting_pair",
                                          "contraction",        "general_gaussian"};
  return names[spec.index()];
}

inline long ensemble_dim(const EnsembleSpec& spec) {
  return std::visit(
      [](const auto& s) -> long {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ensemble::FixedSpectrum>) {
          return static_cast<long>(s.eigenvalues.size());
        } else if constexpr (std::is_same_v<T, ensemble::DegenerateSpectrum>) {
          return std::accumulate(s.multiplicities.begin(), s.multiplicities.end(), 0L);
        } else {
          return s.dim;
        }
      },
      spec);
}

/// Copy of `spec` at dimension `dim`; spectra fixed by value must already match.
inline EnsembleSpec with_dim(EnsembleSpec spec, long dim) {
  std::visit(
      [dim](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ensemble::FixedSpectrum> || std::is_same_v<T, ensemble::DegenerateSpectrum>) {
          (void)s;
        } else {
          s.dim = dim;
        }
      },
      spec);
  if (ensemble_dim(spec) != dim) {
    throw parameter_error(std::string(ensemble_kind(spec)) + ": dimension is fixed by the spectrum at " +
                          std::to_string(ensemble_dim(spec)) + ", requested " + std::to_string(dim));
  }
  return spec;
}

inline void validate(const EnsembleSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ensemble::FixedSpectrum>) {
          if (s.eigenvalues.empty()) throw parameter_error("fixed_spectrum: eigenvalues must be non-empty");
        } else if constexpr (std::is_same_v<T, ensemble::DegenerateSpectrum>) {
          if (s.multiplicities.empty()) throw parameter_error("degenerate_spectrum: multiplicities must be non-empty");
          for (long m : s.multiplicities) {
            if (m < 1) throw parameter_error("degenerate_spectrum: multiplicities must be >= 1");
          }
        } else {
          if (s.dim < 1) throw parameter_error(std::string("ensemble dim must be >= 1"));
          if constexpr (std::is_same_v<T, ensemble::PositivePair>) {
            if (!(s.lo >= 0.0 && s.hi >= s.lo)) throw parameter_error("positive_pair: need 0 <= lo <= hi");
          } else if constexpr (std::is_same_v<T, ensemble::RankRDifference>) {
            if (s.r < 1 || s.r > s.dim) throw parameter_error("rank_r_difference: need 1 <= r <= dim");
            if (!(s.lo > 0.0 && s.hi >= s.lo)) throw parameter_error("rank_r_difference: need 0 < lo <= hi");
          } else if constexpr (std::is_same_v<T, ensemble::GaussianHermitian>) {
            if (!(s.scale > 0.0)) throw parameter_error("gaussian_hermitian: scale must be > 0");
          }
        }
      },
      spec);
}

/// Output of one draw. Pair ensembles fill two matrices, the others one.
struct Sample {
  std::vector<GeneralMatrix> matrices;
  /// Rank-one steps of a RankRDifference draw: A - B = sum_k x_k u_k u_k^*.
  std::vector<double> step_magnitudes;
  GeneralMatrix step_vectors;

  HermitianMatrix hermitian(std::size_t i) const { return HermitianMatrix(matrices.at(i)); }
};

namespace detail {

inline RealVector uniform_vector(long n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  RealVector v(n);
  for (long i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline RealVector gaussian_vector(long n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  RealVector v(n);
  for (long i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

}  // namespace detail

inline Sample sample(const EnsembleSpec& spec, const SeedState& seed) {
  validate(spec);
  auto rng = seed.engine();
  Sample out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ensemble::GaussianHermitian>) {
          out.matrices.push_back(gaussian_hermitian(s.dim, s.scale, rng).matrix());
        } else if constexpr (std::is_same_v<T, ensemble::FixedSpectrum>) {
          const RealVector ev = Eigen::Map<const RealVector>(s.eigenvalues.data(),
                                                             static_cast<Eigen::Index>(s.eigenvalues.size()));
          if (s.haar_basis) {
            out.matrices.push_back(rotate(ev, haar_unitary(ev.size(), rng)).matrix());
          } else {
            out.matrices.push_back(HermitianMatrix::diagonal(ev).matrix());
          }
        } else if constexpr (std::is_same_v<T, ensemble::PositivePair>) {
          for (int k = 0; k < 2; ++k) {
            const RealVector ev = detail::uniform_vector(s.dim, s.lo, s.hi, rng);
            out.matrices.push_back(rotate(ev, haar_unitary(s.dim, rng)).matrix());
          }
        } else if constexpr (std::is_same_v<T, ensemble::RankRDifference>) {
          const HermitianMatrix b = gaussian_hermitian(s.dim, 1.0, rng);
          const GeneralMatrix frame = haar_unitary(s.dim, rng);
          std::uniform_real_distribution<double> logu(std::log(s.lo), std::log(s.hi));
          std::bernoulli_distribution coin(0.5);
          GeneralMatrix a = b.matrix();
          out.step_vectors = frame.leftCols(s.r);
          for (long k = 0; k < s.r; ++k) {
            const double x = (coin(rng) ? 1.0 : -1.0) * std::exp(logu(rng));
            out.step_magnitudes.push_back(x);
            a += x * frame.col(k) * frame.col(k).adjoint();
          }
          out.matrices.push_back(HermitianMatrix(a).matrix());
          out.matrices.push_back(b.matrix());
        } else if constexpr (std::is_same_v<T, ensemble::DegenerateSpectrum>) {
          std::normal_distribution<double> g(0.0, 1.0);
          std::vector<double> ev;
          for (long m : s.multiplicities) {
            const double v = g(rng);
            ev.insert(ev.end(), static_cast<std::size_t>(m), v);
          }
          const RealVector e = Eigen::Map<const RealVector>(ev.data(), static_cast<Eigen::Index>(ev.size()));
          out.matrices.push_back(rotate(e, haar_unitary(e.size(), rng)).matrix());
        } else if constexpr (std::is_same_v<T, ensemble::CommutingPair>) {
          const GeneralMatrix u = haar_unitary(s.dim, rng);
          const RealVector x = detail::gaussian_vector(s.dim, rng);
          const RealVector y = detail::gaussian_vector(s.dim, rng);
          out.matrices.push_back(rotate(x, u).matrix());
          out.matrices.push_back(rotate(y, u).matrix());
        } else if constexpr (std::is_same_v<T, ensemble::Contraction>) {
          const GeneralMatrix g = ginibre(s.dim, s.dim, rng);
          out.matrices.push_back(g / operator_norm(g));
        } else {
          out.matrices.push_back(ginibre(s.dim, s.dim, rng));
        }
      },
      spec);
  return out;
}

/// Two Hermitian matrices: the native pair of pair ensembles, otherwise two independent draws.
inline std::pair<HermitianMatrix, HermitianMatrix> sample_pair(const EnsembleSpec& spec, const SeedState& seed) {
  const Sample s = sample(spec, seed);
  if (s.matrices.size() >= 2) return {s.hermitian(0), s.hermitian(1)};
  const Sample t = sample(spec, seed.child(1));
  return {s.hermitian(0), t.hermitian(0)};
}

}  // namespace opholder

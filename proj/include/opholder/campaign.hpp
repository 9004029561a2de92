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
 * @brief Seeded randomized campaigns over grids of (theta, p or norm, dim).
 *
 * Cell c, trial t draws its instance from SeedState{seed, {c, t}}, so every
 * reported extremum can be replayed from (config, cell, trial) alone.
 */

#pragma once

#include "errors.hpp"
#include "functions.hpp"
#include "lab.hpp"
#include "norms.hpp"
#include "randgen.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace opholder {

/// Verifier names accepted by campaigns and the command line.
inline const std::vector<std::string>& verifier_names() {
  static const std::vector<std::string> names = {"main",       "bks",        "submaj",          "symmetric",
                                                 "inverse",    "reverse",    "commutator",      "quasicommutator",
                                                 "absmap",     "alt",        "telescope"};
  return names;
}

/// Verifiers whose grid is (theta, norm) rather than (theta, p).
inline bool uses_norm_grid(const std::string& v) {
  return v == "bks" || v == "symmetric" || v == "inverse" || v == "reverse" || v == "commutator" ||
         v == "quasicommutator" || v == "absmap";
}

/// Verifiers whose inequality bounds the ratio from below.
inline bool minimizes(const std::string& v) { return v == "inverse" || v == "reverse"; }

/// Verifiers that take a scalar function.
inline bool uses_function(const std::string& v) {
  return !(v == "bks" || v == "reverse" || v == "absmap" || v == "alt");
}

struct RefineSpec {
  int steps = 0;
  double scale = 0.1;
};

struct CampaignConfig {
  std::string verifier = "main";
  std::string function = "power:0.5";
  std::vector<double> thetas{0.5};
  std::vector<double> ps{1.0};
  std::vector<std::string> norms{"schatten:1"};
  std::optional<EnsembleSpec> ensemble;
  std::vector<long> dims{4};
  long trials = 100;
  std::uint64_t seed = 0;
  RefineSpec refine;
  int threads = 1;
};

/// The grid point a cell covers.
struct CellKey {
  double theta = 0.0;
  double p = 0.0;
  std::string norm;
  long dim = 0;
};

struct CellResult {
  CellKey key;
  long trials = 0;
  long evaluated = 0;   ///< non-degenerate records entering the statistics
  long degenerate = 0;  ///< rhs = 0 records, ratio 0 by convention
  long failures = 0;    ///< trials that raised a library error
  long counterexamples = 0;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double q50 = 0.0;
  double q99 = 0.0;
  long argmax_trial = -1;  ///< extremal trial: largest ratio, or smallest for lower-bound verifiers
  std::string argmax_digest;
  double max_companion = 0.0;
  double min_margin = 0.0;
  std::optional<double> refined_ratio;
  std::vector<double> trajectory;
};

struct Trend {
  double theta = 0.0;
  double p = 0.0;
  std::string norm;
  double slope = 0.0;  ///< least-squares slope of log(max ratio) against log(dim)
  long points = 0;
};

/// A record violating a claimed constant, with the inputs needed to replay it.
struct Counterexample {
  std::size_t cell = 0;
  long trial = 0;
  VerificationRecord record;
  std::vector<GeneralMatrix> inputs;
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<CellResult> cells;
  std::vector<Trend> trends;
  std::vector<Counterexample> counterexamples;
};

/// Matrices fed to one verifier call.
struct Instance {
  std::vector<GeneralMatrix> matrices;
  std::vector<double> steps;  ///< telescope magnitudes; matrices[1..] are then the step projections
};

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

inline void validate(const CampaignConfig& c) {
  const auto& names = verifier_names();
  if (std::find(names.begin(), names.end(), c.verifier) == names.end()) {
    throw parameter_error("unknown verifier '" + c.verifier + "'");
  }
  if (c.thetas.empty() || c.dims.empty()) throw parameter_error("campaign grids must be non-empty");
  if (uses_norm_grid(c.verifier) ? c.norms.empty() : c.ps.empty()) {
    throw parameter_error("campaign grids must be non-empty");
  }
  if (c.trials < 1) throw parameter_error("trials must be >= 1");
  for (double t : c.thetas) {
    const bool reverse = minimizes(c.verifier);
    if (reverse ? !(t > 1.0) : !(t > 0.0 && t < 1.0)) {
      throw parameter_error(reverse ? "theta must be > 1 for this verifier" : "theta must be in (0,1)");
    }
  }
  for (double p : c.ps) {
    if (!(p > 0.0)) throw parameter_error("p must be > 0");
  }
  for (long d : c.dims) {
    if (d < 1) throw parameter_error("dims must be >= 1");
  }
  for (const auto& n : c.norms) {
    const NormSpec spec = parse_norm_spec(n);
    if (c.verifier == "symmetric" && !std::holds_alternative<PowerOf>(spec)) {
      throw parameter_error("symmetric campaigns need power:... norms, got '" + n + "'");
    }
    if (c.verifier == "bks" && !is_fully_symmetric(spec)) {
      throw parameter_error("bks campaigns need fully symmetric norms, got '" + n + "'");
    }
  }
  if (c.threads < 1) throw parameter_error("threads must be >= 1");
  if (c.refine.steps < 0 || !(c.refine.scale > 0.0)) throw parameter_error("refine needs steps >= 0 and scale > 0");
}

/// Cells in order: theta, then p or norm, then dim.
inline std::vector<CellKey> cell_keys(const CampaignConfig& c) {
  std::vector<CellKey> keys;
  for (double theta : c.thetas) {
    if (uses_norm_grid(c.verifier)) {
      for (const auto& n : c.norms) {
        for (long d : c.dims) keys.push_back({theta, exponent_of(parse_norm_spec(n)), format_norm_spec(parse_norm_spec(n)), d});
      }
    } else {
      for (double p : c.ps) {
        for (long d : c.dims) keys.push_back({theta, p, format_norm_spec(Schatten{p}), d});
      }
    }
  }
  return keys;
}

inline EnsembleSpec default_ensemble(const std::string& verifier, long dim) {
  if (verifier == "bks" || verifier == "alt") return ensemble::PositivePair{dim, 0.0, 1.0};
  if (verifier == "absmap") return ensemble::GeneralGaussian{dim};
  if (verifier == "telescope") return ensemble::RankRDifference{dim, std::min<long>(4, dim), 1e-2, 1.0};
  return ensemble::GaussianHermitian{dim, 1.0};
}

inline EnsembleSpec cell_ensemble(const CampaignConfig& c, long dim) {
  return c.ensemble ? with_dim(*c.ensemble, dim) : default_ensemble(c.verifier, dim);
}

/// The instance of trial `trial` in cell `cell`.
inline Instance draw_instance(const CampaignConfig& c, std::size_t cell, long trial, long dim) {
  const EnsembleSpec ens = cell_ensemble(c, dim);
  const SeedState seed{c.seed, {static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(trial)}};
  Instance inst;
  const std::string& v = c.verifier;
  if (v == "absmap") {
    inst.matrices.push_back(sample(ens, seed.child(0)).matrices.at(0));
    inst.matrices.push_back(sample(ens, seed.child(1)).matrices.at(0));
  } else if (v == "commutator") {
    inst.matrices.push_back(sample(ens, seed.child(0)).matrices.at(0));
    inst.matrices.push_back(sample(ensemble::GeneralGaussian{dim}, seed.child(2)).matrices.at(0));
  } else if (v == "telescope") {
    if (!std::holds_alternative<ensemble::RankRDifference>(ens)) {
      throw parameter_error("telescope campaigns need a rank_r_difference ensemble");
    }
    const Sample s = sample(ens, seed);
    inst.matrices.push_back(s.matrices.at(1));
    for (std::size_t k = 0; k < s.step_magnitudes.size(); ++k) {
      const auto u = s.step_vectors.col(static_cast<Eigen::Index>(k));
      inst.matrices.push_back(u * u.adjoint());
      inst.steps.push_back(s.step_magnitudes[k]);
    }
  } else {
    const auto [a, b] = sample_pair(ens, seed);
    inst.matrices.push_back(a.matrix());
    inst.matrices.push_back(b.matrix());
    if (v == "quasicommutator") {
      inst.matrices.push_back(sample(ensemble::Contraction{dim}, seed.child(3)).matrices.at(0));
    }
  }
  return inst;
}

/// Per-cell evaluation context: the parsed norm and the function with its seminorm.
struct CellContext {
  std::string verifier;
  CellKey key;
  NormSpec spec = Schatten{1.0};
  std::optional<ScalarFunction> f;
  std::optional<double> f_norm;
  bool expm1_variant = false;
};

inline CellContext make_context(const CampaignConfig& c, const CellKey& key, const GridSpec& grid = {}) {
  CellContext ctx;
  ctx.verifier = c.verifier;
  ctx.key = key;
  ctx.spec = parse_norm_spec(key.norm);
  if (c.verifier == "reverse") ctx.expm1_variant = c.function == "signed_expm1";
  if (uses_function(c.verifier)) {
    ctx.f = catalog::make(c.function);
    if (c.verifier == "inverse") {
      ctx.f_norm = seminorm(*ctx.f, d_of_p(key.p), 1.0 / key.theta, grid).value;
    } else {
      ctx.f_norm = seminorm(*ctx.f, d_of_p(key.p), key.theta, grid).value;
    }
    if (!std::isfinite(*ctx.f_norm)) throw capability_error(c.function + ": seminorm is infinite on the sample grid");
  }
  return ctx;
}

inline VerificationRecord evaluate(const CellContext& ctx, const Instance& in) {
  const auto& m = in.matrices;
  const double theta = ctx.key.theta, p = ctx.key.p;
  const std::string& v = ctx.verifier;
  auto h = [&m](std::size_t i) { return HermitianMatrix(m.at(i)); };
  if (v == "main") return verify_main(*ctx.f, theta, p, h(0), h(1), ctx.f_norm);
  if (v == "bks") return verify_bks(theta, ctx.spec, h(0), h(1));
  if (v == "submaj") return verify_submajorization(*ctx.f, theta, p, h(0), h(1), ctx.f_norm);
  if (v == "symmetric") return verify_symmetric(*ctx.f, theta, ctx.spec, h(0), h(1), ctx.f_norm);
  if (v == "inverse") return verify_inverse(*ctx.f, theta, ctx.spec, h(0), h(1), ctx.f_norm);
  if (v == "reverse") return verify_reverse_power(theta, ctx.spec, h(0), h(1), ctx.expm1_variant);
  if (v == "commutator") return verify_commutator(*ctx.f, theta, ctx.spec, h(0), m.at(1), ctx.f_norm);
  if (v == "quasicommutator") return verify_quasi_commutator(*ctx.f, theta, ctx.spec, h(0), h(1), m.at(2), ctx.f_norm);
  if (v == "absmap") return verify_abs_map(ctx.spec, m.at(0), m.at(1));
  if (v == "alt") return verify_alt(h(0), h(1), theta, p);
  if (v == "telescope") {
    std::vector<TelescopeStep> steps;
    for (std::size_t k = 0; k < in.steps.size(); ++k) steps.push_back({in.steps[k], ProjectionMatrix(h(k + 1))});
    return telescope_finite_rank(*ctx.f, theta, p, h(0), steps);
  }
  throw parameter_error("unknown verifier '" + v + "'");
}

/// Re-evaluates one trial of a campaign.
inline std::pair<VerificationRecord, Instance> replay_trial(const CampaignConfig& c, std::size_t cell, long trial) {
  validate(c);
  const auto keys = cell_keys(c);
  if (cell >= keys.size()) throw parameter_error("replay_trial: cell index out of range");
  const auto ctx = make_context(c, keys[cell]);
  Instance in = draw_instance(c, cell, trial, keys[cell].dim);
  auto rec = evaluate(ctx, in);
  rec.inputs_digest = SeedState{c.seed, {cell, static_cast<std::uint64_t>(trial)}}.digest() + "," + rec.inputs_digest;
  return {rec, std::move(in)};
}

namespace detail {

inline double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline bool hermitian_verifier_input(const std::string& v, std::size_t index) {
  if (v == "absmap") return false;
  if (v == "commutator") return index == 0;
  if (v == "quasicommutator") return index < 2;
  return true;
}

inline bool positive_verifier(const std::string& v) { return v == "bks" || v == "alt"; }

/// Gaussian perturbation of an instance, preserving the verifier's structural constraints.
inline Instance perturb(const Instance& in, const std::string& v, double scale, std::mt19937_64& rng) {
  Instance out = in;
  const std::size_t count = v == "telescope" ? 1 : in.matrices.size();
  for (std::size_t i = 0; i < count; ++i) {
    const GeneralMatrix& m = in.matrices[i];
    const double size = std::max(operator_norm(m), 1e-12);
    GeneralMatrix g = ginibre(m.rows(), m.cols(), rng);
    if (hermitian_verifier_input(v, i)) g = (0.5 * (g + g.adjoint())).eval();
    GeneralMatrix next = m + scale * size * g;
    if (positive_verifier(v)) {
      const auto d = eig_hermitian(HermitianMatrix(next));
      next = apply_function([](double l) { return std::max(l, 0.0); }, d).matrix();
    }
    if (v == "quasicommutator" && i == 2) next /= std::max(operator_norm(next), 1e-300);
    out.matrices[i] = next;
  }
  return out;
}

inline bool better(const std::string& v, double candidate, double incumbent) {
  return minimizes(v) ? candidate < incumbent : candidate > incumbent;
}

inline CellResult run_cell(const CampaignConfig& c, std::size_t index, const CellKey& key,
                           std::vector<Counterexample>& found) {
  CellResult r;
  r.key = key;
  r.trials = c.trials;
  const CellContext ctx = make_context(c, key);
  std::vector<double> ratios;
  double best = minimizes(c.verifier) ? std::numeric_limits<double>::infinity() : -1.0;
  double lowest_margin = std::numeric_limits<double>::infinity();
  for (long t = 0; t < c.trials; ++t) {
    try {
      Instance in = draw_instance(c, index, t, key.dim);
      const VerificationRecord rec = evaluate(ctx, in);
      if (rec.companion) r.max_companion = std::max(r.max_companion, *rec.companion);
      if (rec.margin) lowest_margin = std::min(lowest_margin, *rec.margin);
      if (rec.counterexample) {
        ++r.counterexamples;
        Counterexample ce{index, t, rec, std::move(in.matrices)};
        ce.record.inputs_digest = SeedState{c.seed, {index, static_cast<std::uint64_t>(t)}}.digest();
        found.push_back(std::move(ce));
      }
      if (rec.degenerate && rec.ratio == 0.0) {
        ++r.degenerate;
        continue;
      }
      ratios.push_back(rec.ratio);
      if (better(c.verifier, rec.ratio, best)) {
        best = rec.ratio;
        r.argmax_trial = t;
      }
    } catch (const error&) {
      ++r.failures;
    }
  }
  r.evaluated = static_cast<long>(ratios.size());
  r.min_margin = std::isfinite(lowest_margin) ? lowest_margin : 0.0;
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    r.min_ratio = ratios.front();
    r.max_ratio = ratios.back();
    r.q50 = quantile(ratios, 0.5);
    r.q99 = quantile(ratios, 0.99);
  }
  if (r.argmax_trial >= 0) {
    r.argmax_digest = SeedState{c.seed, {index, static_cast<std::uint64_t>(r.argmax_trial)}}.digest();
  }

  if (c.refine.steps > 0 && r.argmax_trial >= 0) {
    Instance current = draw_instance(c, index, r.argmax_trial, key.dim);
    double value = best;
    r.trajectory.push_back(value);
    for (int s = 0; s < c.refine.steps; ++s) {
      const SeedState seed{c.seed, {index, static_cast<std::uint64_t>(c.trials), static_cast<std::uint64_t>(s)}};
      auto rng = seed.engine();
      const double scale = c.refine.scale * std::pow(0.5, static_cast<double>(s) * 8.0 / c.refine.steps);
      try {
        Instance cand = perturb(current, c.verifier, scale, rng);
        const VerificationRecord rec = evaluate(ctx, cand);
        if (!(rec.degenerate && rec.ratio == 0.0) && std::isfinite(rec.ratio) && better(c.verifier, rec.ratio, value)) {
          value = rec.ratio;
          current = std::move(cand);
        }
      } catch (const error&) {
      }
      r.trajectory.push_back(value);
    }
    r.refined_ratio = value;
  }
  return r;
}

inline std::vector<Trend> trends(const std::vector<CellResult>& cells) {
  std::vector<Trend> out;
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i;
    while (j < cells.size() && cells[j].key.theta == cells[i].key.theta && cells[j].key.p == cells[i].key.p &&
           cells[j].key.norm == cells[i].key.norm) {
      ++j;
    }
    Trend t{cells[i].key.theta, cells[i].key.p, cells[i].key.norm, 0.0, 0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = i; k < j; ++k) {
      if (!(cells[k].max_ratio > 0.0) || !std::isfinite(cells[k].max_ratio)) continue;
      const double x = std::log(static_cast<double>(cells[k].key.dim)), y = std::log(cells[k].max_ratio);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      ++t.points;
    }
    const double n = static_cast<double>(t.points);
    const double den = n * sxx - sx * sx;
    if (t.points >= 2 && den > 0.0) t.slope = (n * sxy - sx * sy) / den;
    out.push_back(t);
    i = j;
  }
  return out;
}

}  // namespace detail

/// Runs every cell; cells may run on `config.threads` threads without changing any number.
inline CampaignReport run_campaign(const CampaignConfig& config) {
  validate(config);
  const auto keys = cell_keys(config);
  CampaignReport rep;
  rep.config = config;
  rep.cells.resize(keys.size());
  std::vector<std::vector<Counterexample>> found(keys.size());
  std::vector<std::string> errors(keys.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      try {
        rep.cells[i] = detail::run_cell(config, i, keys[i], found[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int n = std::min<int>(config.threads, static_cast<int>(keys.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw parameter_error("campaign cell failed: " + e);
  }
  for (auto& f : found) {
    for (auto& ce : f) rep.counterexamples.push_back(std::move(ce));
  }
  rep.trends = detail::trends(rep.cells);
  return rep;
}

}  // namespace opholder

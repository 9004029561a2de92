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

// opholder: command-line front end for verifications, campaigns, multiplier
// bounds and seminorm reports.
//
// Exit codes: 0 ok, 1 runtime failure, 2 usage error, 3 counterexample candidate
// (or a replayed table that differs from the stored one).

#include "opholder.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace opholder;
using io::json;

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;
constexpr int kCounterexample = 3;

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OPHOLDER_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw usage_error(std::string("OPHOLDER_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

std::string fmt(double x) { return io::format_double(x); }

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string ineq = "main";
  std::optional<std::string> f;
  std::optional<double> theta;
  double p = 1.0;
  std::optional<std::string> norm;
  long dim = 4;
  std::optional<std::uint64_t> seed;
  long trials = 1;
  std::vector<double> spectrum_x, spectrum_y;
  std::optional<std::string> ensemble;
};

CampaignConfig verify_config(const VerifyArgs& a) {
  CampaignConfig c;
  c.verifier = a.ineq;
  const double theta = a.theta.value_or(minimizes(a.ineq) ? 2.0 : 0.5);
  c.thetas = {theta};
  c.ps = {a.p};
  if (a.f) {
    c.function = *a.f;
  } else if (a.ineq == "inverse") {
    c.function = "signed_power:" + fmt(1.0 / theta);
  }
  const long dim = a.spectrum_x.empty() ? a.dim : static_cast<long>(a.spectrum_x.size());
  if (a.norm) {
    c.norms = {*a.norm};
  } else if (a.ineq == "symmetric") {
    c.norms = {"power:kyfan:" + std::to_string(dim) + ":" + fmt(a.p)};
  } else {
    c.norms = {format_norm_spec(Schatten{a.p})};
  }
  if (a.norm && !uses_norm_grid(a.ineq)) c.ps = {exponent_of(parse_norm_spec(*a.norm))};
  c.dims = {dim};
  c.trials = a.trials;
  c.seed = a.seed ? *a.seed : default_seed();
  if (a.ensemble) {
    std::vector<std::string> bad;
    c.ensemble = io::ensemble_from_json(json{{"kind", *a.ensemble}}, bad, "ensemble.");
    if (!bad.empty()) throw usage_error("unknown ensemble '" + *a.ensemble + "'");
  }
  validate(c);
  return c;
}

json record_line(const VerificationRecord& r) { return io::record_to_json(r); }

/// Fixed diagonal inputs: X = diag(x), Y = diag(y); auxiliary matrices are the identity.
int verify_fixed(const VerifyArgs& a, const CampaignConfig& c) {
  if (a.spectrum_x.size() != a.spectrum_y.size()) {
    throw usage_error("--spectrum-x and --spectrum-y must have the same length");
  }
  if (c.verifier == "telescope") throw usage_error("telescope does not take fixed spectra");
  const auto keys = cell_keys(c);
  const CellContext ctx = make_context(c, keys.at(0));
  const auto diag = [](const std::vector<double>& v) {
    RealVector d(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) d(static_cast<Eigen::Index>(i)) = v[i];
    return GeneralMatrix(d.cast<Complex>().asDiagonal());
  };
  Instance in;
  in.matrices = {diag(a.spectrum_x), diag(a.spectrum_y)};
  if (c.verifier == "quasicommutator") {
    const auto n = static_cast<Eigen::Index>(a.spectrum_x.size());
    in.matrices.push_back(GeneralMatrix::Identity(n, n));
  }
  VerificationRecord rec = evaluate(ctx, in);
  rec.inputs_digest = "fixed," + rec.inputs_digest;
  json out = record_line(rec);
  out["trials"] = 1;
  out["max_ratio"] = io::num(rec.ratio);
  std::cout << out.dump() << "\n";
  return rec.counterexample ? kCounterexample : kOk;
}

int cmd_verify(const VerifyArgs& a) {
  const CampaignConfig c = verify_config(a);
  if (!a.spectrum_x.empty() || !a.spectrum_y.empty()) return verify_fixed(a, c);
  const CampaignReport rep = run_campaign(c);
  const CellResult& cell = rep.cells.at(0);
  if (cell.failures == cell.trials) throw domain_error("every trial failed for this configuration");
  VerificationRecord rec;
  if (!rep.counterexamples.empty()) {
    rec = rep.counterexamples.front().record;
  } else {
    rec = replay_trial(c, 0, cell.argmax_trial >= 0 ? cell.argmax_trial : 0).first;
  }
  json out = record_line(rec);
  out["trials"] = cell.trials;
  out["max_ratio"] = io::num(cell.max_ratio);
  out["min_ratio"] = io::num(cell.min_ratio);
  out["failures"] = cell.failures;
  std::cout << out.dump() << "\n";
  return rep.counterexamples.empty() ? kOk : kCounterexample;
}

// ---------------------------------------------------------------------------
// campaign
// ---------------------------------------------------------------------------

struct CampaignArgs {
  std::string config;
  std::string replay;
  std::string out = "campaign_out";
  std::optional<int> threads;
};

int cmd_campaign(const CampaignArgs& a) {
  namespace fs = std::filesystem;
  json config_json;
  std::optional<std::string> stored_table;
  if (!a.replay.empty()) {
    const auto manifest = io::manifest_from_json(io::read_json_file(a.replay));
    config_json = manifest.config;
    const fs::path base = fs::path(a.replay).parent_path();
    for (const auto& o : manifest.outputs) {
      if (fs::path(o).extension() == ".csv") {
        const fs::path p = fs::path(o).is_absolute() ? fs::path(o) : base / fs::path(o).filename();
        if (fs::exists(p)) stored_table = io::read_file(p.string());
      }
    }
  } else if (!a.config.empty()) {
    config_json = io::read_json_file(a.config);
  } else {
    throw usage_error("campaign needs --config or --replay");
  }
  CampaignConfig c = io::config_from_json(config_json);
  if (a.threads) {
    if (*a.threads < 1) throw usage_error("--threads must be >= 1");
    c.threads = *a.threads;
  }
  const CampaignReport rep = run_campaign(c);
  const std::string table = io::csv_table(rep);
  const fs::path out(a.out);
  const std::string report_path = (out / "report.json").string();
  const std::string table_path = (out / "table.csv").string();
  const std::string manifest_path = (out / "manifest.json").string();

  io::RunManifest m;
  m.command = a.replay.empty() ? "campaign --config " + a.config : "campaign --replay " + a.replay;
  m.config = io::config_to_json(c);
  m.seed = c.seed;
  m.timestamp = io::utc_timestamp();
  m.outputs = {report_path, table_path};

  json report = io::report_to_json(rep);
  report["manifest"] = "manifest.json";
  io::write_atomic(report_path, report.dump(2) + "\n");
  io::write_atomic(table_path, table);
  io::write_atomic(manifest_path, io::manifest_to_json(m).dump(2) + "\n");

  std::cout << table;
  for (const auto& t : rep.trends) {
    std::cerr << "trend theta=" << fmt(t.theta) << " norm=" << t.norm << " slope=" << fmt(t.slope) << "\n";
  }
  if (stored_table && *stored_table != table) {
    std::cerr << "replay: table differs from the stored one\n";
    return kCounterexample;
  }
  if (stored_table) std::cerr << "replay: table identical\n";
  if (!rep.counterexamples.empty()) {
    std::cerr << rep.counterexamples.size() << " counterexample candidate(s) stored in " << report_path << "\n";
    return kCounterexample;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// mpnorm
// ---------------------------------------------------------------------------

struct MpArgs {
  std::string symbol = "alpha";
  double p = 1.0;
  std::string method = "auto";
  std::string f = "power:0.5";
  double theta = 0.5;
  double a = 1.0;
  std::optional<int> b;
  long dim = 6;
  long trials = 200;
  std::optional<std::uint64_t> seed;
};

int cmd_mpnorm(const MpArgs& a) {
  if (!(a.p > 0.0)) throw usage_error("--p must be > 0");
  const std::vector<std::string> methods = {"auto", "decomposition", "fourier", "empirical"};
  if (std::find(methods.begin(), methods.end(), a.method) == methods.end()) {
    throw usage_error("unknown method '" + a.method + "'");
  }
  const SeedState seed{a.seed ? *a.seed : default_seed(), {}};
  BivariateSymbol sym;
  std::optional<double> upper;
  std::string method;
  std::optional<int> k;
  json extra = json::object();

  if (a.symbol == "alpha" || a.symbol == "beta") {
    if (a.method == "fourier") throw usage_error(a.symbol + " has no Fourier-Sobolev bound; use decomposition");
    sym = a.symbol == "alpha" ? symbols::alpha() : symbols::beta();
    if (a.method != "empirical") {
      upper = a.symbol == "alpha" ? alpha_bound(a.p) : beta_bound(a.p);
      method = "decomposition";
    }
  } else if (a.symbol == "b0" || a.symbol == "b1") {
    if (a.method == "decomposition" || a.method == "fourier") {
      throw usage_error(a.symbol + " has no implemented upper bound; use empirical");
    }
    sym = a.symbol == "b0" ? symbols::b0(a.theta, a.a) : symbols::b1(a.theta, a.a);
  } else if (a.symbol.rfind("dyadic:", 0) == 0) {
    try {
      std::size_t used = 0;
      k = std::stoi(a.symbol.substr(7), &used);
      if (used != a.symbol.size() - 7) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw usage_error("bad dyadic index in '" + a.symbol + "'");
    }
    if (a.method == "decomposition") throw usage_error("dyadic symbols use the fourier method");
    const auto f = catalog::make(a.f);
    sym = dyadic_symbols(f, *k).g;
    if (a.method != "empirical") {
      if (a.b && !(*a.b > 1.0 / std::min(a.p, 1.0))) {
        throw usage_error("--b must exceed 1/p for the Fourier method");
      }
      const auto r = dyadic_upper_bound(f, a.theta, a.p, *k, numerics::SmoothBump::standard(), {256, false, false},
                                        {}, a.b);
      upper = r.upper;
      method = "fourier";
      extra = {{"b", r.b},
               {"alpha_part", io::num(r.alpha_part)},
               {"beta_part", io::num(r.beta_part)},
               {"local_part", io::num(r.local_part)},
               {"s0_norm", io::num(r.s0_norm)},
               {"p_used", io::num(r.p_used)}};
    }
  } else {
    throw usage_error("unknown symbol '" + a.symbol + "'");
  }

  const EmpiricalReport lo = empirical_mp_lower(sym, a.p, a.dim, a.trials, seed);
  MpBound bound{upper, lo.value, method.empty() ? "empirical" : method + "+empirical"};
  json out = {{"symbol", sym.description},
              {"p", io::num(a.p)},
              {"lower", io::num(bound.lower)},
              {"upper", bound.upper ? io::num(*bound.upper) : json(nullptr)},
              {"method", bound.method},
              {"consistent", bound.consistent()},
              {"trials", lo.trials},
              {"dim", a.dim}};
  if (k) {
    const double scale = std::pow(2.0, *k * (a.theta - 1.0));
    out["k"] = *k;
    out["normalized_lower"] = io::num(scale * bound.lower);
    if (upper) out["normalized_upper"] = io::num(scale * *upper);
  }
  if (!extra.empty()) out["detail"] = extra;
  std::cout << out.dump() << "\n";
  if (!bound.consistent()) {
    std::cerr << "lower bound exceeds upper bound\n";
    return kCounterexample;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// seminorm
// ---------------------------------------------------------------------------

struct SeminormArgs {
  std::string f = "power:0.5";
  double theta = 0.5;
  std::optional<int> d;
  std::optional<double> p;
  bool as_json = false;
};

int cmd_seminorm(const SeminormArgs& a) {
  const auto f = catalog::make(a.f);
  std::optional<int> dp;
  if (a.p) dp = d_of_p(*a.p);
  const int d = a.d ? *a.d : dp.value_or(0);
  if (!a.d && !dp) throw usage_error("seminorm needs --d or --p");
  const SeminormEstimate est = seminorm(f, d, a.theta);
  if (a.as_json) {
    json per = json::array();
    for (double v : est.per_order) per.push_back(io::num(v));
    json out = {{"f", f.name()}, {"theta", io::num(a.theta)}, {"d", d}, {"per_order", per},
                {"max", io::num(est.value)}, {"grid", est.grid}};
    if (dp) out["d_of_p"] = *dp;
    std::cout << out.dump() << "\n";
    return kOk;
  }
  std::ostringstream os;
  os.precision(12);
  os << "f=" << f.name() << " theta=" << a.theta << " d=" << d << "\n";
  os << "per_order:";
  for (double v : est.per_order) os << " " << v;
  os << "\nmax: " << est.value << "\n";
  if (dp) os << "d(p)=" << *dp << "\n";
  os << "grid: " << est.grid << "\n";
  std::cout << os.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opholder: operator Hoelder estimates for matrix functions"};
  app.set_version_flag("--version", std::string(opholder::version));
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run one inequality verifier over seeded trials");
  verify->add_option("--ineq", va.ineq, "Verifier")->check(CLI::IsMember(opholder::verifier_names()));
  verify->add_option("--f", va.f, "Catalog function, e.g. power:0.5");
  verify->add_option("--theta", va.theta, "Hoelder exponent");
  verify->add_option("--p", va.p, "Schatten exponent");
  verify->add_option("--norm", va.norm, "Norm spec: schatten:p, weak:p, kyfan:k, power:<base>:p");
  verify->add_option("--dim", va.dim, "Matrix dimension")->check(CLI::PositiveNumber);
  verify->add_option("--seed", va.seed, "Root seed (default: $OPHOLDER_SEED or 0)");
  verify->add_option("--trials", va.trials, "Number of trials")->check(CLI::PositiveNumber);
  verify->add_option("--spectrum-x", va.spectrum_x, "Fixed diagonal first input")->delimiter(',');
  verify->add_option("--spectrum-y", va.spectrum_y, "Fixed diagonal second input")->delimiter(',');
  verify->add_option("--ensemble", va.ensemble, "Ensemble kind, e.g. positive_pair");

  CampaignArgs ca;
  auto* campaign = app.add_subcommand("campaign", "Run a campaign from a JSON config");
  campaign->add_option("--config", ca.config, "Config file");
  campaign->add_option("--replay", ca.replay, "Stored manifest.json to replay");
  campaign->add_option("--out", ca.out, "Output directory");
  campaign->add_option("--threads", ca.threads, "Worker threads");

  MpArgs ma;
  auto* mp = app.add_subcommand("mpnorm", "Upper and empirical lower bounds for a Schur multiplier");
  mp->add_option("--symbol", ma.symbol, "alpha | beta | b0 | b1 | dyadic:k");
  mp->add_option("--p", ma.p, "Schatten exponent");
  mp->add_option("--method", ma.method, "auto | decomposition | fourier | empirical");
  mp->add_option("--f", ma.f, "Catalog function for dyadic symbols");
  mp->add_option("--theta", ma.theta, "Hoelder exponent");
  mp->add_option("--a", ma.a, "Cut-off for b0/b1");
  mp->add_option("--b", ma.b, "Sobolev order for the Fourier method");
  mp->add_option("--dim", ma.dim, "Sampling dimension")->check(CLI::PositiveNumber);
  mp->add_option("--trials", ma.trials, "Sampling trials")->check(CLI::PositiveNumber);
  mp->add_option("--seed", ma.seed, "Root seed");

  SeminormArgs sa;
  auto* sn = app.add_subcommand("seminorm", "Estimate the S_{d,theta} seminorm of a catalog function");
  sn->add_option("--f", sa.f, "Catalog function");
  sn->add_option("--theta", sa.theta, "Exponent");
  sn->add_option("--d", sa.d, "Derivative order");
  sn->add_option("--p", sa.p, "Report d(p) and use it when --d is absent");
  sn->add_flag("--json", sa.as_json, "Single-line JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify) return cmd_verify(va);
    if (*campaign) return cmd_campaign(ca);
    if (*mp) return cmd_mpnorm(ma);
    if (*sn) return cmd_seminorm(sa);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const opholder::parameter_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const opholder::capability_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

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
 * @brief JSON configs and reports, the flat CSV table, atomic writes and run manifests.
 *
 * Non-finite doubles are written as the strings "inf", "-inf" and "nan".
 */

#pragma once

#include "campaign.hpp"
#include "errors.hpp"
#include "randgen.hpp"
#include "version.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace opholder::io {

using json = nlohmann::json;

/// Malformed config; keys() names every offending key.
class config_error : public parameter_error {
 public:
  explicit config_error(std::vector<std::string> keys, const std::string& detail = "")
      : parameter_error(message(keys, detail)), keys_(std::move(keys)) {}
  const std::vector<std::string>& keys() const noexcept { return keys_; }

 private:
  static std::string message(const std::vector<std::string>& keys, const std::string& detail) {
    std::string m = "invalid config keys:";
    for (const auto& k : keys) m += " " + k;
    if (!detail.empty()) m += " (" + detail + ")";
    return m;
  }
  std::vector<std::string> keys_;
};

// ---------------------------------------------------------------------------
// Scalars and matrices
// ---------------------------------------------------------------------------

inline json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double to_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw parameter_error("expected a number, got " + j.dump());
}

/// %.17g, the table's number format.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Row-major real and imaginary parts.
inline json matrix_to_json(const GeneralMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      re.push_back(num(m(i, k).real()));
      im.push_back(num(m(i, k).imag()));
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

inline GeneralMatrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (rows < 0 || cols < 0 || re.size() != static_cast<std::size_t>(rows * cols) || im.size() != re.size()) {
    throw shape_error("matrix entry count does not match rows x cols");
  }
  GeneralMatrix m(rows, cols);
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index k = 0; k < cols; ++k, ++n) m(i, k) = Complex(to_num(re[n]), to_num(im[n]));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

inline json ensemble_to_json(const EnsembleSpec& spec) {
  json j = {{"kind", ensemble_kind(spec)}};
  std::visit(
      [&j](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ensemble::GaussianHermitian>) {
          j["dim"] = s.dim;
          j["scale"] = num(s.scale);
        } else if constexpr (std::is_same_v<T, ensemble::FixedSpectrum>) {
          json ev = json::array();
          for (double x : s.eigenvalues) ev.push_back(num(x));
          j["eigenvalues"] = ev;
          j["haar_basis"] = s.haar_basis;
        } else if constexpr (std::is_same_v<T, ensemble::PositivePair>) {
          j["dim"] = s.dim;
          j["lo"] = num(s.lo);
          j["hi"] = num(s.hi);
        } else if constexpr (std::is_same_v<T, ensemble::RankRDifference>) {
          j["dim"] = s.dim;
          j["r"] = s.r;
          j["lo"] = num(s.lo);
          j["hi"] = num(s.hi);
        } else if constexpr (std::is_same_v<T, ensemble::DegenerateSpectrum>) {
          j["multiplicities"] = s.multiplicities;
        } else {
          j["dim"] = s.dim;
        }
      },
      spec);
  return j;
}

namespace detail {

/// Collects offending keys instead of failing on the first one.
class KeyCollector {
 public:
  explicit KeyCollector(std::vector<std::string>& bad) : bad_(bad) {}

  template <class T, class Convert>
  void read(const json& obj, const std::string& key, const std::string& path, T& out, Convert convert) {
    if (!obj.contains(key)) return;
    try {
      out = convert(obj.at(key));
    } catch (const std::exception&) {
      bad_.push_back(path + key);
    }
  }

  void unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) bad_.push_back(path + it.key());
    }
  }

  void flag(const std::string& key) { bad_.push_back(key); }

 private:
  std::vector<std::string>& bad_;
};

inline long as_long(const json& j) {
  if (!j.is_number_integer()) throw parameter_error("expected an integer");
  return j.get<long>();
}

inline double as_double(const json& j) { return to_num(j); }

inline std::vector<double> as_doubles(const json& j) {
  if (!j.is_array()) throw parameter_error("expected an array");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(to_num(x));
  return v;
}

inline std::vector<long> as_longs(const json& j) {
  if (!j.is_array()) throw parameter_error("expected an array");
  std::vector<long> v;
  for (const auto& x : j) v.push_back(as_long(x));
  return v;
}

}  // namespace detail

inline EnsembleSpec ensemble_from_json(const json& j, std::vector<std::string>& bad, const std::string& path) {
  detail::KeyCollector keys(bad);
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    keys.flag(path + "kind");
    return ensemble::GaussianHermitian{};
  }
  const std::string kind = j.at("kind").get<std::string>();
  const auto L = detail::as_long;
  const auto D = detail::as_double;
  if (kind == "gaussian_hermitian") {
    ensemble::GaussianHermitian s;
    keys.unknown(j, {"kind", "dim", "scale"}, path);
    keys.read(j, "dim", path, s.dim, L);
    keys.read(j, "scale", path, s.scale, D);
    return s;
  }
  if (kind == "fixed_spectrum") {
    ensemble::FixedSpectrum s;
    keys.unknown(j, {"kind", "eigenvalues", "haar_basis"}, path);
    keys.read(j, "eigenvalues", path, s.eigenvalues, detail::as_doubles);
    keys.read(j, "haar_basis", path, s.haar_basis, [](const json& v) { return v.get<bool>(); });
    return s;
  }
  if (kind == "positive_pair") {
    ensemble::PositivePair s;
    keys.unknown(j, {"kind", "dim", "lo", "hi"}, path);
    keys.read(j, "dim", path, s.dim, L);
    keys.read(j, "lo", path, s.lo, D);
    keys.read(j, "hi", path, s.hi, D);
    return s;
  }
  if (kind == "rank_r_difference") {
    ensemble::RankRDifference s;
    keys.unknown(j, {"kind", "dim", "r", "lo", "hi"}, path);
    keys.read(j, "dim", path, s.dim, L);
    keys.read(j, "r", path, s.r, L);
    keys.read(j, "lo", path, s.lo, D);
    keys.read(j, "hi", path, s.hi, D);
    return s;
  }
  if (kind == "degenerate_spectrum") {
    ensemble::DegenerateSpectrum s;
    keys.unknown(j, {"kind", "multiplicities"}, path);
    keys.read(j, "multiplicities", path, s.multiplicities, detail::as_longs);
    return s;
  }
  if (kind == "commuting_pair" || kind == "contraction" || kind == "general_gaussian") {
    long dim = 4;
    keys.unknown(j, {"kind", "dim"}, path);
    keys.read(j, "dim", path, dim, L);
    if (kind == "commuting_pair") return ensemble::CommutingPair{dim};
    if (kind == "contraction") return ensemble::Contraction{dim};
    return ensemble::GeneralGaussian{dim};
  }
  keys.flag(path + "kind");
  return ensemble::GaussianHermitian{};
}

// ---------------------------------------------------------------------------
// Campaign configs
// ---------------------------------------------------------------------------

inline json config_to_json(const CampaignConfig& c) {
  json thetas = json::array(), ps = json::array();
  for (double t : c.thetas) thetas.push_back(num(t));
  for (double p : c.ps) ps.push_back(num(p));
  json j = {{"verifier", c.verifier},
            {"function", c.function},
            {"thetas", thetas},
            {"ps", ps},
            {"norms", c.norms},
            {"dims", c.dims},
            {"trials", c.trials},
            {"seed", c.seed},
            {"refine", {{"steps", c.refine.steps}, {"scale", num(c.refine.scale)}}},
            {"threads", c.threads}};
  if (c.ensemble) j["ensemble"] = ensemble_to_json(*c.ensemble);
  return j;
}

/// Parses and validates; every malformed key is reported at once.
inline CampaignConfig config_from_json(const json& j) {
  if (!j.is_object()) throw config_error({"<root>"}, "config must be an object");
  std::vector<std::string> bad;
  detail::KeyCollector keys(bad);
  CampaignConfig c;
  keys.unknown(j, {"verifier", "function", "thetas", "ps", "norms", "ensemble", "dims", "trials", "seed", "refine",
                   "threads"},
               "");
  const auto S = [](const json& v) { return v.get<std::string>(); };
  keys.read(j, "verifier", "", c.verifier, S);
  keys.read(j, "function", "", c.function, S);
  keys.read(j, "thetas", "", c.thetas, detail::as_doubles);
  keys.read(j, "ps", "", c.ps, detail::as_doubles);
  keys.read(j, "norms", "", c.norms, [](const json& v) {
    auto n = v.get<std::vector<std::string>>();
    for (const auto& s : n) (void)parse_norm_spec(s);
    return n;
  });
  keys.read(j, "dims", "", c.dims, detail::as_longs);
  keys.read(j, "trials", "", c.trials, detail::as_long);
  keys.read(j, "seed", "", c.seed, [](const json& v) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw parameter_error("seed must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  });
  keys.read(j, "threads", "", c.threads, [](const json& v) { return static_cast<int>(detail::as_long(v)); });
  if (j.contains("refine")) {
    const auto& r = j.at("refine");
    if (!r.is_object()) {
      keys.flag("refine");
    } else {
      keys.unknown(r, {"steps", "scale"}, "refine.");
      keys.read(r, "steps", "refine.", c.refine.steps, [](const json& v) { return static_cast<int>(detail::as_long(v)); });
      keys.read(r, "scale", "refine.", c.refine.scale, detail::as_double);
    }
  }
  if (j.contains("ensemble")) c.ensemble = ensemble_from_json(j.at("ensemble"), bad, "ensemble.");
  if (!bad.empty()) throw config_error(bad);
  try {
    validate(c);
    if (c.ensemble) {
      for (long d : c.dims) validate(with_dim(*c.ensemble, d));
    }
  } catch (const parameter_error& e) {
    throw config_error({"<values>"}, e.what());
  }
  return c;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parameter_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error({"<syntax>"}, path + ": " + e.what());
  }
}

inline CampaignConfig load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Records and reports
// ---------------------------------------------------------------------------

inline json record_to_json(const VerificationRecord& r) {
  json j = {{"name", r.name},
            {"lhs", num(r.lhs)},
            {"rhs", num(r.rhs)},
            {"ratio", num(r.ratio)},
            {"holds_with_constant", r.holds_with_constant ? num(*r.holds_with_constant) : json(nullptr)},
            {"inputs_digest", r.inputs_digest},
            {"degenerate", r.degenerate},
            {"counterexample", r.counterexample},
            {"companion", r.companion ? num(*r.companion) : json(nullptr)},
            {"margin", r.margin ? num(*r.margin) : json(nullptr)}};
  return j;
}

inline std::optional<double> opt_num(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return to_num(j.at(key));
}

inline VerificationRecord record_from_json(const json& j) {
  VerificationRecord r;
  r.name = j.at("name").get<std::string>();
  r.lhs = to_num(j.at("lhs"));
  r.rhs = to_num(j.at("rhs"));
  r.ratio = to_num(j.at("ratio"));
  r.holds_with_constant = opt_num(j, "holds_with_constant");
  r.inputs_digest = j.at("inputs_digest").get<std::string>();
  r.degenerate = j.at("degenerate").get<bool>();
  r.counterexample = j.at("counterexample").get<bool>();
  r.companion = opt_num(j, "companion");
  r.margin = opt_num(j, "margin");
  return r;
}

inline json cell_to_json(const CellResult& c) {
  json traj = json::array();
  for (double x : c.trajectory) traj.push_back(num(x));
  return {{"theta", num(c.key.theta)},
          {"p", num(c.key.p)},
          {"norm", c.key.norm},
          {"dim", c.key.dim},
          {"trials", c.trials},
          {"evaluated", c.evaluated},
          {"degenerate", c.degenerate},
          {"failures", c.failures},
          {"counterexamples", c.counterexamples},
          {"max_ratio", num(c.max_ratio)},
          {"min_ratio", num(c.min_ratio)},
          {"q50", num(c.q50)},
          {"q99", num(c.q99)},
          {"argmax_trial", c.argmax_trial},
          {"argmax_digest", c.argmax_digest},
          {"max_companion", num(c.max_companion)},
          {"min_margin", num(c.min_margin)},
          {"refined_ratio", c.refined_ratio ? num(*c.refined_ratio) : json(nullptr)},
          {"trajectory", traj}};
}

inline CellResult cell_from_json(const json& j) {
  CellResult c;
  c.key = {to_num(j.at("theta")), to_num(j.at("p")), j.at("norm").get<std::string>(), j.at("dim").get<long>()};
  c.trials = j.at("trials").get<long>();
  c.evaluated = j.at("evaluated").get<long>();
  c.degenerate = j.at("degenerate").get<long>();
  c.failures = j.at("failures").get<long>();
  c.counterexamples = j.at("counterexamples").get<long>();
  c.max_ratio = to_num(j.at("max_ratio"));
  c.min_ratio = to_num(j.at("min_ratio"));
  c.q50 = to_num(j.at("q50"));
  c.q99 = to_num(j.at("q99"));
  c.argmax_trial = j.at("argmax_trial").get<long>();
  c.argmax_digest = j.at("argmax_digest").get<std::string>();
  c.max_companion = to_num(j.at("max_companion"));
  c.min_margin = to_num(j.at("min_margin"));
  c.refined_ratio = opt_num(j, "refined_ratio");
  for (const auto& x : j.at("trajectory")) c.trajectory.push_back(to_num(x));
  return c;
}

inline json report_to_json(const CampaignReport& r) {
  json cells = json::array(), trends = json::array(), ces = json::array();
  for (const auto& c : r.cells) cells.push_back(cell_to_json(c));
  for (const auto& t : r.trends) {
    trends.push_back(
        {{"theta", num(t.theta)}, {"p", num(t.p)}, {"norm", t.norm}, {"slope", num(t.slope)}, {"points", t.points}});
  }
  for (const auto& ce : r.counterexamples) {
    json inputs = json::array();
    for (const auto& m : ce.inputs) inputs.push_back(matrix_to_json(m));
    ces.push_back({{"cell", ce.cell}, {"trial", ce.trial}, {"record", record_to_json(ce.record)}, {"inputs", inputs}});
  }
  return {{"config", config_to_json(r.config)},
          {"ratio_convention", "ratio = lhs/rhs; rhs = 0 gives ratio 0, excluded from max/min/quantiles"},
          {"cells", cells},
          {"trends", trends},
          {"counterexamples", ces}};
}

inline CampaignReport report_from_json(const json& j) {
  CampaignReport r;
  r.config = config_from_json(j.at("config"));
  for (const auto& c : j.at("cells")) r.cells.push_back(cell_from_json(c));
  for (const auto& t : j.at("trends")) {
    r.trends.push_back({to_num(t.at("theta")), to_num(t.at("p")), t.at("norm").get<std::string>(),
                        to_num(t.at("slope")), t.at("points").get<long>()});
  }
  for (const auto& ce : j.at("counterexamples")) {
    Counterexample c;
    c.cell = ce.at("cell").get<std::size_t>();
    c.trial = ce.at("trial").get<long>();
    c.record = record_from_json(ce.at("record"));
    for (const auto& m : ce.at("inputs")) c.inputs.push_back(matrix_from_json(m));
    r.counterexamples.push_back(std::move(c));
  }
  return r;
}

/// One row per cell: theta,p,norm,dim,trials,max_ratio,q50,q99,argmax_digest.
inline std::string csv_table(const CampaignReport& r) {
  std::string out = "theta,p,norm,dim,trials,max_ratio,q50,q99,argmax_digest\n";
  for (const auto& c : r.cells) {
    out += format_double(c.key.theta) + "," + format_double(c.key.p) + "," + c.key.norm + "," +
           std::to_string(c.key.dim) + "," + std::to_string(c.trials) + "," + format_double(c.max_ratio) + "," +
           format_double(c.q50) + "," + format_double(c.q99) + "," + c.argmax_digest + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files and manifests
// ---------------------------------------------------------------------------

/// Writes to a sibling temporary file and renames it over `path`.
inline void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw parameter_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw parameter_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parameter_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct RunManifest {
  std::string command;
  json config;
  std::string artifact_version = version;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::vector<std::string> outputs;
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json manifest_to_json(const RunManifest& m) {
  return {{"command", m.command},     {"config", m.config},       {"artifact_version", m.artifact_version},
          {"seed", m.seed},           {"timestamp", m.timestamp}, {"outputs", m.outputs}};
}

inline RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.config = j.at("config");
  m.artifact_version = j.at("artifact_version").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.timestamp = j.at("timestamp").get<std::string>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  return m;
}

}  // namespace opholder::io

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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef OPHOLDER_CLI
#error "OPHOLDER_CLI must name the opholder executable"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" + std::string(OPHOLDER_CLI) + "\" " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("opholder_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(Cli, Version) {
  const auto r = run("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.1.0\n");
}

TEST(Cli, SeminormText) {
  const auto r = run("seminorm --f power:0.5 --theta 0.5 --p 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("per_order: 1 0.5 0.25"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("max: 1\n"), std::string::npos);
  EXPECT_NE(r.out.find("d(p)=4"), std::string::npos);
}

TEST(Cli, SeminormJson) {
  const auto r = run("seminorm --f log1p --theta 0.5 --d 2 --json");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("f"), "log1p");
  EXPECT_EQ(j.at("per_order").size(), 3u);
  EXPECT_GT(j.at("max").get<double>(), 0.0);
}

TEST(Cli, VerifyBks) {
  const auto r = run("verify --ineq bks --theta 0.5 --norm schatten:1 --dim 8 --trials 300 --seed 5");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("name"), "bks");
  EXPECT_EQ(j.at("trials"), 300);
  EXPECT_LE(j.at("max_ratio").get<double>(), 1.0);
  EXPECT_EQ(j.at("ratio"), j.at("max_ratio"));
  EXPECT_FALSE(j.at("counterexample").get<bool>());
}

TEST(Cli, VerifyIsSeededFromTheEnvironment) {
  const std::string args = "verify --ineq main --f power:0.5 --theta 0.5 --p 1 --dim 3 --trials 40";
  const auto a = run(args, "OPHOLDER_SEED=9");
  const auto b = run(args + " --seed 9");
  const auto c = run(args, "OPHOLDER_SEED=10");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(run(args, "OPHOLDER_SEED=abc").code, 2);
}

TEST(Cli, VerifyFixedSpectra) {
  const auto r = run("verify --ineq alt --theta 0.5 --p 1 --spectrum-x 1,1,1 --spectrum-y 1,1,1");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("margin").get<double>(), 0.0);
  const auto m = run("verify --ineq main --f power:0.5 --theta 0.5 --p 2 --spectrum-x 1,0 --spectrum-y 0,0");
  ASSERT_EQ(m.code, 0);
  EXPECT_NEAR(json::parse(m.out).at("lhs").get<double>(), 1.0, 1e-14);
}

TEST(Cli, MpnormDecompositionSymbols) {
  const auto a = run("mpnorm --symbol alpha --p 1 --trials 100");
  ASSERT_EQ(a.code, 0);
  const auto ja = json::parse(a.out);
  EXPECT_NEAR(ja.at("upper").get<double>(), 4.0, 1e-12);
  EXPECT_LE(ja.at("lower").get<double>(), 4.0);
  EXPECT_TRUE(ja.at("consistent").get<bool>());
  const auto b = run("mpnorm --symbol beta --p 1 --trials 100");
  ASSERT_EQ(b.code, 0);
  EXPECT_NEAR(json::parse(b.out).at("upper").get<double>(), 2.0, 1e-12);
}

TEST(Cli, MpnormDyadic) {
  const auto r = run("mpnorm --symbol dyadic:0 --f power:0.5 --theta 0.5 --p 1 --trials 30");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("k"), 0);
  EXPECT_LE(j.at("lower").get<double>(), j.at("upper").get<double>());
  EXPECT_TRUE(j.contains("detail"));
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("verify --ineq nope").code, 2);
  EXPECT_EQ(run("verify --ineq bks --norm schatten:x").code, 2);
  EXPECT_EQ(run("verify --ineq main --theta 1.5").code, 2);
  EXPECT_EQ(run("seminorm --f power:0.5 --theta 0.5 --d 20").code, 2);
  EXPECT_EQ(run("seminorm --f nosuch --theta 0.5").code, 2);
  EXPECT_EQ(run("mpnorm --symbol dyadic:0 --f power:0.5 --theta 0.5 --p 1 --b 1").code, 2);
  EXPECT_EQ(run("--bogus").code, 2);
  EXPECT_EQ(run("campaign").code, 2);
}

TEST(Cli, CampaignWritesArtifactsAndReplays) {
  const auto dir = scratch("campaign");
  const auto cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"verifier": "bks", "thetas": [0.5], "norms": ["schatten:1", "kyfan:2"],
                            "dims": [2, 3], "trials": 40, "seed": 4})";
  const auto first = run("campaign --config " + cfg.string() + " --out " + (dir / "a").string());
  ASSERT_EQ(first.code, 0);
  for (const char* f : {"report.json", "table.csv", "manifest.json"}) EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
  EXPECT_EQ(first.out, slurp(dir / "a" / "table.csv"));
  const auto report = json::parse(slurp(dir / "a" / "report.json"));
  EXPECT_EQ(report.at("cells").size(), 4u);
  const auto manifest = json::parse(slurp(dir / "a" / "manifest.json"));
  EXPECT_EQ(manifest.at("seed"), 4);
  EXPECT_EQ(manifest.at("artifact_version"), "0.1.0");

  const auto replay = run("campaign --replay " + (dir / "a" / "manifest.json").string() + " --out " + (dir / "b").string());
  EXPECT_EQ(replay.code, 0);
  EXPECT_EQ(slurp(dir / "b" / "table.csv"), slurp(dir / "a" / "table.csv"));

  const auto threaded =
      run("campaign --config " + cfg.string() + " --threads 3 --out " + (dir / "c").string());
  EXPECT_EQ(threaded.out, first.out);

  std::ofstream(dir / "a" / "table.csv", std::ios::app) << "tampered\n";
  EXPECT_EQ(run("campaign --replay " + (dir / "a" / "manifest.json").string() + " --out " + (dir / "d").string()).code, 3);
  fs::remove_all(dir);
}

TEST(Cli, CampaignConfigErrorsExitTwo) {
  const auto dir = scratch("badconfig");
  const auto cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"verifier": "main", "colour": "blue"})";
  EXPECT_EQ(run("campaign --config " + cfg.string() + " --out " + (dir / "o").string()).code, 2);
  EXPECT_EQ(run("campaign --config " + (dir / "missing.json").string()).code, 2);
  fs::remove_all(dir);
}

TEST(Cli, SampleConfigsLoad) {
  const fs::path configs = fs::path(OPHOLDER_SOURCE_DIR) / "configs";
  ASSERT_TRUE(fs::exists(configs));
  for (const auto& e : fs::directory_iterator(configs)) {
    if (e.path().extension() != ".json") continue;
    auto j = json::parse(slurp(e.path()));
    j["trials"] = 3;
    j.erase("refine");
    const auto dir = scratch("sample");
    std::ofstream(dir / "c.json") << j.dump();
    EXPECT_EQ(run("campaign --config " + (dir / "c.json").string() + " --out " + (dir / "o").string()).code, 0)
        << e.path();
    fs::remove_all(dir);
  }
}

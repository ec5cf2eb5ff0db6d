// Copyright 2026 The qopt Authors
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
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "qopt/io.hpp"

#ifndef QOPT_CLI_PATH
#error "QOPT_CLI_PATH must name the qopt executable"
#endif

namespace {

using nlohmann::json;

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string("NO_COLOR=1 SOURCE_DATE_EPOCH=0 '") + QOPT_CLI_PATH + "' " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string work(const std::string& name) { return std::string(QOPT_WORK_DIR) + "/" + name; }

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// theta = pi/2 + atan(2) and theta = pi/2 - atan(2), phi = 0.
const std::string kPairArgs =
    "--psi-in 0.22975292054736127,0.9732489894677302 --psi-f 0.9732489894677302,0.22975292054736121";

TEST(Cli, SolveUnconstrained) {
  const CliRun r = run("solve --psi-in 1,0 --psi-f 0,1 --omega 1");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["t_min"].get<double>(), 1.5707963267948966, 1e-15);
  EXPECT_EQ(j["provenance"]["solver"], "unconstrained");
  EXPECT_EQ(j["provenance"]["timestamp"], "1970-01-01T00:00:00Z");
  EXPECT_EQ(j["schema_version"], "1");
}

TEST(Cli, SolveOutputIsParseableAndStable) {
  const std::string path = work("cli_doc.json");
  const CliRun r = run("solve --psi-in 1,0 --psi-f 0.6,0.8I --omega 2 --gamma-max 0.5");
  ASSERT_EQ(r.code, 3);  // not a symmetric pair
  const CliRun s = run("solve " + kPairArgs + " --omega 1 --gamma-max 1");
  ASSERT_EQ(s.code, 0);
  write_file(path, s.out);
  const qopt::ProtocolDocument d = qopt::parse_protocol_document(read_file(path));
  EXPECT_EQ(qopt::to_json(d), s.out);
  ASSERT_TRUE(d.diagnostics.has_value());
  EXPECT_EQ(d.diagnostics->regime, qopt::Regime::BangOffBang);
  EXPECT_NEAR(d.t_min, 1.334065, 1e-5);
}

TEST(Cli, SolveFallsBackToOracleOnRequest) {
  const CliRun r = run("solve --psi-in 1,0 --psi-f 0.6,0.8I --omega 2 --gamma-max 0.5 --oracle");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["provenance"]["solver"], "oracle");
  EXPECT_GT(j["t_min"].get<double>(), 0.0);
}

TEST(Cli, SolveTwoControlReduction) {
  const CliRun r = run("solve --psi-in 1,0 --psi-f 0,1 --omega1-max 3 --omega2-max 4");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(json::parse(r.out)["t_min"].get<double>(), 3.141592653589793 / 10.0, 1e-15);
}

TEST(Cli, SolveDensity) {
  const CliRun ok = run("solve --density --psi-in 0.8,0,0,0.2 --psi-f 0.2,0,0,0.8 --omega 1");
  EXPECT_EQ(ok.code, 0);
  const CliRun bad = run("solve --density --psi-in 0.8,0,0,0.2 --psi-f 0.3,0,0,0.7 --omega 1");
  EXPECT_EQ(bad.code, 4);
  const CliRun mixed = run("solve --density --psi-in 0.5,0,0,0.5 --psi-f 0.5,0,0,0.5 --omega 1");
  ASSERT_EQ(mixed.code, 0);  // every unitary fixes the maximally mixed state
  EXPECT_EQ(json::parse(mixed.out)["t_min"].get<double>(), 0.0);
}

TEST(Cli, InvalidArguments) {
  EXPECT_EQ(run("solve --psi-in 1,0 --psi-f 0,1").code, 2);
  EXPECT_EQ(run("solve --psi-in 0,0 --psi-f 0,1 --omega 1").code, 2);
  EXPECT_EQ(run("solve --psi-in 1,0 --psi-f 0,1 --omega -1").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, SimulateReportsBound) {
  const std::string path = work("cli_sim.json");
  write_file(path, run("solve " + kPairArgs + " --omega 1 --gamma-max 1").out);
  const std::string traj = work("cli_traj.csv");
  const CliRun r = run("simulate --protocol " + path + " --epsilon 0.005 --trajectory " + traj);
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("pass=true"), std::string::npos) << r.out;
  EXPECT_EQ(read_file(traj).substr(0, 17), "t,theta,phi,x,y,z");

  const CliRun csv = run("simulate --protocol " + path + " --epsilon 0");
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, 17), "t,theta,phi,x,y,z");

  EXPECT_EQ(run("simulate --protocol " + path + " --epsilon 0.5 --compensate").code, 5);
  EXPECT_EQ(run("simulate --protocol " + path + " --epsilon 0.01 --dt 0.01").code, 2);
  EXPECT_EQ(run("simulate --protocol " + work("missing.json")).code, 2);
}

TEST(Cli, SweepCsv) {
  const CliRun r = run("sweep --tan-alpha 2 --c-over-omega-min 0.05 --c-over-omega-max 100 --c-over-omega-points 200 "
                    "--log-grid");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "c_over_omega,omega_t_min,omega_t_off,two_omega_t_c,regime");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  EXPECT_EQ(rows, 200);
  EXPECT_EQ(last.substr(0, 4), "100,");
  EXPECT_NE(last.find("BangOffBang"), std::string::npos);
}

TEST(Cli, SinglePointSweepMatchesSolve) {
  const CliRun a = run("sweep --tan-alpha 2 --c-over-omega-min 1 --c-over-omega-max 1 --c-over-omega-points 1");
  ASSERT_EQ(a.code, 0);
  const std::string row = a.out.substr(a.out.find('\n') + 1);
  const double t = std::stod(row.substr(row.find(',') + 1));
  const CliRun s = run("solve " + kPairArgs + " --omega 1 --gamma-max 1");
  EXPECT_NEAR(json::parse(s.out)["t_min"].get<double>(), t, 1e-12);
}

TEST(Cli, VerifyAgainstClosedForm) {
  const CliRun r = run("verify " + kPairArgs + " --omega 1 --gamma-max 1");
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["sound"].get<bool>());
  EXPECT_TRUE(j["tight"].get<bool>());
  const CliRun bad = run("verify " + kPairArgs + " --omega 1 --gamma-max 1 --expect-tmin 1.0");
  EXPECT_EQ(bad.code, 6);
  EXPECT_FALSE(json::parse(bad.out)["tight"].get<bool>());
}

TEST(Cli, WitnessLargeCoupling) {
  const CliRun r = run("witness --c 10 --max-segments 3");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_FALSE(j["three_segment_fails"].get<bool>());
  EXPECT_TRUE(j["three_segment"]["converged"].get<bool>());
}

TEST(Cli, HelpAndVersion) {
  const CliRun h = run("--help");
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("solve"), std::string::npos);
  EXPECT_NE(h.out.find("witness"), std::string::npos);
}

}  // namespace

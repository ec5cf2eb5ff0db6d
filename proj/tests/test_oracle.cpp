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

#include <cmath>
#include <fstream>
#include <sstream>

#include "support.hpp"

#ifndef QOPT_FIXTURE_DIR
#error "QOPT_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace {

using namespace qopt;
using qopt::testing::Rng;

const SymmetricPair pair2 = SymmetricPair::from_tan_alpha(2.0);

ControlBounds constrained(double c, double w) {
  ControlBounds b;
  b.gamma_max = c;
  b.omega1_max = w;
  return b;
}

TEST(Oracle, SymmetricPairMatchesClosedForm) {
  const OracleResult r = brute_force_min_time(pair2.psi_in(), pair2.psi_f(), constrained(1.0, 1.0), SearchConfig{});
  ASSERT_TRUE(r.converged);
  EXPECT_GE(r.best_time, 1.334065 - 1e-4);
  EXPECT_LE(r.best_time, 1.334065 + 1e-3);
  EXPECT_EQ(r.max_segments, 3);
}

TEST(Oracle, LargeBoundApproachesUnconstrainedTime) {
  const OracleResult r =
      brute_force_min_time(BlochState::north(), BlochState::south(), constrained(1e3, 1.0), SearchConfig{});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.best_time, detail::pi / 2.0, 0.02 * detail::pi / 2.0);
}

TEST(Oracle, IdenticalStatesCostNothing) {
  const BlochState s(1.0, 2.0);
  const OracleResult r = brute_force_min_time(s, s, constrained(1.0, 1.0), SearchConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.best_time, 0.0);
  EXPECT_TRUE(r.schedule.empty());
}

TEST(Oracle, ReportedFidelityIsReproducible) {
  Rng rng(12);
  ControlBounds b;
  b.omega1_max = 1.0;
  for (int i = 0; i < 5; ++i) {
    const BlochState in = qopt::testing::random_state(rng);
    const BlochState f = qopt::testing::random_state(rng);
    const OracleResult r = brute_force_min_time(in, f, b, SearchConfig{});
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(transfer_fidelity(propagate_exact(r.schedule), in, f), r.achieved_fidelity, 1e-12);
    EXPECT_NEAR(r.schedule.total_time(), r.best_time, 1e-15);
  }
}

TEST(Oracle, DeterministicAcrossRunsAndThreads) {
  const BlochState in(2.3, 0.4);
  const BlochState f(0.9, 5.0);
  SearchConfig one;
  one.threads = 1;
  one.seed = 99;
  SearchConfig many = one;
  many.threads = 4;
  const OracleResult a = brute_force_min_time(in, f, constrained(0.7, 1.0), one);
  const OracleResult b = brute_force_min_time(in, f, constrained(0.7, 1.0), one);
  const OracleResult c = brute_force_min_time(in, f, constrained(0.7, 1.0), many);
  EXPECT_EQ(a.best_time, b.best_time);
  EXPECT_EQ(a.schedule, b.schedule);
  EXPECT_EQ(a.best_time, c.best_time);
  EXPECT_EQ(a.schedule, c.schedule);
}

TEST(Oracle, RandomSeedModeIsDeterministic) {
  SearchConfig cfg;
  cfg.max_grid_points = 1;  // force random seeds
  cfg.seed = 5;
  const OracleResult a = brute_force_min_time(pair2.psi_in(), pair2.psi_f(), constrained(1.0, 1.0), cfg);
  const OracleResult b = brute_force_min_time(pair2.psi_in(), pair2.psi_f(), constrained(1.0, 1.0), cfg);
  ASSERT_TRUE(a.converged);
  EXPECT_EQ(a.best_time, b.best_time);
  EXPECT_NEAR(a.best_time, 1.3340673603679092, 1e-3);
}

TEST(Oracle, NotConvergedIsAResultNotAnError) {
  SearchConfig cfg;
  cfg.max_segments = 1;
  // No single rotation about x or (x +- z)/sqrt2 carries the north pole to (0.6, 0.8, 0).
  const BlochState target(detail::pi / 2.0, std::atan2(0.8, 0.6));
  const OracleResult r = brute_force_min_time(BlochState::north(), target, constrained(1.0, 1.0), cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_LT(r.achieved_fidelity, cfg.fidelity_target);
}

TEST(Oracle, TimeUpperBoundRespected) {
  SearchConfig cfg;
  cfg.time_upper_bound = 1.0;
  const OracleResult r = brute_force_min_time(pair2.psi_in(), pair2.psi_f(), constrained(1.0, 1.0), cfg);
  EXPECT_FALSE(r.converged);
}

TEST(Oracle, ThreeBoundedControlsUseCandidateSet) {
  ControlBounds b{1.0, 1.0, 1.0};
  SearchConfig cfg;
  cfg.max_segments = 2;
  cfg.duration_grid = 24;
  const OracleResult r = brute_force_min_time(BlochState::north(), BlochState::south(), b, cfg);
  ASSERT_TRUE(r.converged);
  // Any admissible Hamiltonian has transverse part at most sqrt(2).
  EXPECT_GE(r.best_time, detail::pi / (2.0 * std::sqrt(2.0)) - 1e-6);
}

TEST(Oracle, FreeControlSanitySearch) {
  SearchConfig cfg;
  cfg.free_controls = true;
  cfg.duration_grid = 8;
  cfg.projection_starts = 6;
  cfg.descent_starts = 1;
  const OracleResult r = brute_force_min_time(pair2.psi_in(), pair2.psi_f(), constrained(1.0, 1.0), cfg);
  ASSERT_TRUE(r.converged);
  EXPECT_GE(r.best_time, 1.3340673603679092 - 1e-6);
  EXPECT_LE(r.best_time, 1.3340673603679092 * 1.05);
}

TEST(Oracle, ConfigValidation) {
  SearchConfig bad;
  bad.max_segments = 0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = SearchConfig{};
  bad.fidelity_target = 1.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = SearchConfig{};
  bad.min_segments = 4;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(Witness, LargeCouplingNeedsNoMultistep) {
  const double c = 10.0;
  const double tc = std::atan2(1.0, c);
  SearchConfig cfg;
  cfg.max_segments = 3;
  const WitnessReport w = multistep_witness(tc - 0.05, 0.05, c, 1.0, cfg);
  EXPECT_FALSE(w.three_segment_fails);
  EXPECT_TRUE(w.three_segment.converged);
}

TEST(Witness, EqualAnglesTrivial) {
  SearchConfig cfg;
  const WitnessReport w = multistep_witness(0.7, 0.7, 0.1, 1.0, cfg);
  EXPECT_TRUE(w.three_segment.converged);
  EXPECT_EQ(w.three_segment.best_time, 0.0);
  EXPECT_TRUE(w.multistep_converges);
}

TEST(Witness, SmallCouplingDefeatsThreeSegments) {
  const double tc = std::atan2(1.0, 0.1);
  SearchConfig cfg;
  cfg.max_segments = 3;
  const WitnessReport w = multistep_witness(tc - 0.05, 0.05, 0.1, 1.0, cfg);
  EXPECT_TRUE(w.three_segment_fails);
  EXPECT_LT(w.three_segment.achieved_fidelity, 0.9);
}

TEST(Witness, RecordedMultistepScheduleStillTransfers) {
  std::ifstream in(std::string(QOPT_FIXTURE_DIR) + "/witness_multistep.json");
  ASSERT_TRUE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  const ProtocolDocument doc = parse_protocol_document(buf.str());
  ASSERT_TRUE(doc.problem.psi_in && doc.problem.psi_f);
  const BlochState a = amplitudes_to_bloch(*doc.problem.psi_in);
  const BlochState b = amplitudes_to_bloch(*doc.problem.psi_f);
  EXPECT_NEAR(a.theta(), std::atan2(1.0, 0.1) - 0.05, 1e-15);
  EXPECT_NEAR(b.theta(), 0.05, 1e-15);
  EXPECT_GE(transfer_fidelity(propagate_exact(doc.protocol), a, b), 1.0 - 1e-6);
  EXPECT_GE(doc.protocol.size(), 5u);
  for (const auto& seg : doc.protocol.segments()) {
    const auto& c = std::get<Constant>(seg);
    EXPECT_LE(std::abs(c.controls.g3), 0.1);
    EXPECT_EQ(c.controls.g1, 1.0);
  }
  EXPECT_NEAR(doc.t_min, doc.protocol.total_time(), 1e-15);
}

TEST(Witness, MultistepSearchReproducesFixture) {
  std::ifstream in(std::string(QOPT_FIXTURE_DIR) + "/witness_multistep.json");
  std::stringstream buf;
  buf << in.rdbuf();
  const ProtocolDocument doc = parse_protocol_document(buf.str());
  const double tc = std::atan2(1.0, 0.1);
  SearchConfig cfg;
  cfg.max_segments = 9;
  const WitnessReport w = multistep_witness(tc - 0.05, 0.05, 0.1, 1.0, cfg);
  ASSERT_TRUE(w.multistep_converges);
  EXPECT_EQ(w.multistep_segments, static_cast<int>(doc.protocol.size()));
  EXPECT_NEAR(w.multistep.best_time, doc.t_min, 1e-6);
}

}  // namespace

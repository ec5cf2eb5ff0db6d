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

#include "support.hpp"

namespace {

using namespace qopt;
using qopt::testing::Rng;

TEST(BlochState, PoleConvention) {
  const BlochState n(0.0, 1.3);
  EXPECT_EQ(n.phi(), 0.0);
  const BlochState s(detail::pi, 4.0);
  EXPECT_EQ(s.phi(), 0.0);
  const BlochState w(1.0, -1.0);
  EXPECT_NEAR(w.phi(), detail::two_pi - 1.0, 1e-15);
}

TEST(BlochState, RejectsOutOfRange) {
  EXPECT_THROW(BlochState(-0.1, 0.0), InvalidArgument);
  EXPECT_THROW(BlochState(3.2, 0.0), InvalidArgument);
  EXPECT_THROW(BlochState(1.0, std::nan("")), InvalidArgument);
}

TEST(Amplitudes, KnownStates) {
  const BlochState n = amplitudes_to_bloch(1.0, 0.0);
  EXPECT_EQ(n.theta(), 0.0);
  EXPECT_EQ(n.phi(), 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  const BlochState e = amplitudes_to_bloch(Complex(r), Complex(0.0, r));
  EXPECT_NEAR(e.theta(), detail::pi / 2.0, 1e-15);
  EXPECT_NEAR(e.phi(), detail::pi / 2.0, 1e-15);
  EXPECT_THROW(amplitudes_to_bloch(0.0, 0.0), InvalidArgument);
}

TEST(Amplitudes, FromBloch) {
  const Spinor s = bloch_to_amplitudes(BlochState::south());
  EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(s[1] - 1.0), 0.0, 1e-16);
  const Spinor m = bloch_to_amplitudes(BlochState(detail::pi / 2.0, detail::pi));
  EXPECT_NEAR(std::abs(m[0] - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m[1] + 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  const double theta_in = detail::pi / 2.0 + std::atan(2.0);
  const Spinor p = bloch_to_amplitudes(BlochState(theta_in, 0.0));
  EXPECT_NEAR(p[0].real(), std::cos(theta_in / 2.0), 1e-15);
  EXPECT_NEAR(p[1].real(), std::sin(theta_in / 2.0), 1e-15);
  EXPECT_EQ(p[0].imag(), 0.0);
  EXPECT_EQ(p[1].imag(), 0.0);
}

TEST(Density, DiagonalDecomposition) {
  const auto [a, b] = density_eigendecomposition(DensityMatrix::from_entries(1.0, 0.0, 0.0, 0.0));
  EXPECT_NEAR(a.value, 1.0, 1e-15);
  EXPECT_NEAR(b.value, 0.0, 1e-15);
  EXPECT_EQ(a.vector.theta(), 0.0);
  EXPECT_NEAR(b.vector.theta(), detail::pi, 1e-15);
}

TEST(Density, MaximallyMixedIsDegenerate) {
  EXPECT_THROW(density_eigendecomposition(DensityMatrix::from_entries(0.5, 0.0, 0.0, 0.5)), DegenerateSpectrum);
}

TEST(Density, ConstructThenDecompose) {
  const BlochState s(detail::pi / 3.0, 1.0);
  const DensityMatrix rho = DensityMatrix::mixture(0.75, s);
  const auto [a, b] = density_eigendecomposition(rho);
  EXPECT_NEAR(a.value, 0.75, 1e-10);
  EXPECT_NEAR(b.value, 0.25, 1e-10);
  EXPECT_NEAR(a.vector.theta(), detail::pi / 3.0, 1e-10);
  EXPECT_NEAR(a.vector.phi(), 1.0, 1e-10);
  EXPECT_NEAR(b.vector.theta(), 2.0 * detail::pi / 3.0, 1e-10);
  EXPECT_NEAR(b.vector.phi(), 1.0 + detail::pi, 1e-10);
}

TEST(Density, Validation) {
  EXPECT_THROW(DensityMatrix::from_entries(0.6, Complex(0.1, 0.1), Complex(0.1, 0.1), 0.4), InvalidArgument);
  EXPECT_THROW(DensityMatrix::from_entries(0.6, 0.0, 0.0, 0.5), InvalidArgument);
  EXPECT_THROW(DensityMatrix::from_entries(1.2, 0.0, 0.0, -0.2), InvalidArgument);
}

TEST(ThetaCAxis, Examples) {
  const RotationAxis x = theta_c_axis(0.0, 1.0, 1);
  EXPECT_NEAR(x.x, 1.0, 1e-15);
  EXPECT_NEAR(x.z, 0.0, 1e-15);
  const RotationAxis d = theta_c_axis(1.0, 1.0, 1);
  EXPECT_NEAR(d.x, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(d.z, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(d.polar_angle(), detail::pi / 4.0, 1e-15);
  const RotationAxis m = theta_c_axis(2.0, 1.0, -1);
  EXPECT_NEAR(m.x, 1.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(m.z, -2.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(std::hypot(m.x, std::hypot(m.y, m.z)), 1.0, 1e-12);
  EXPECT_THROW(theta_c_axis(0.0, 0.0, 1), InvalidArgument);
  EXPECT_THROW(theta_c_axis(1.0, 1.0, 0), InvalidArgument);
}

TEST(ThetaCAxis, MonotoneInCoupling) {
  double prev = theta_c_axis(0.0, 1.0, 1).polar_angle();
  EXPECT_NEAR(prev, detail::pi / 2.0, 1e-15);
  for (double c = 0.01; c < 1e4; c *= 1.3) {
    const double t = theta_c_axis(c, 1.0, 1).polar_angle();
    EXPECT_LT(t, prev);
    EXPECT_NEAR(std::sin(t), 1.0 / std::hypot(c, 1.0), 1e-12);
    prev = t;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Evolve, MatchesTransferFidelity) {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const Unitary2 u = qopt::testing::random_unitary(rng);
    const BlochState a = qopt::testing::random_state(rng);
    EXPECT_NEAR(transfer_fidelity(u, a, evolve(u, a)), 1.0, 1e-12);
  }
}

}  // namespace

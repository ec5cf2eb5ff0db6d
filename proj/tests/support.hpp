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

#pragma once

// Hand-rolled random generators for property tests. Each generator draws from
// a caller-owned engine so that every test is reproducible from its seed.

#include <cmath>
#include <cstdint>
#include <random>

#include "qopt/qopt.hpp"

namespace qopt::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& r, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(r); }

/// Uniform on the sphere.
inline BlochState random_state(Rng& r) {
  return {std::acos(uniform(r, -1.0, 1.0)), uniform(r, 0.0, detail::two_pi)};
}

/// Uniform on the sphere, rejecting polar angles within `margin` of the poles.
inline BlochState random_state_off_poles(Rng& r, double margin) {
  for (;;) {
    BlochState s = random_state(r);
    if (s.theta() > margin && s.theta() < detail::pi - margin) return s;
  }
}

inline PauliVector random_pauli(Rng& r, double scale) {
  return {uniform(r, -scale, scale), uniform(r, -scale, scale), uniform(r, -scale, scale)};
}

/// Haar-distributed SU(2) element via a uniform unit quaternion.
inline Unitary2 random_unitary(Rng& r) {
  std::normal_distribution<double> n(0.0, 1.0);
  double q[4];
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : q) {
      x = n(r);
      norm += x * x;
    }
  } while (norm < 1e-12);
  norm = std::sqrt(norm);
  for (double& x : q) x /= norm;
  return Unitary2::from_entries({q[0], q[3]}, {q[2], q[1]}, {-q[2], q[1]}, {q[0], -q[3]});
}

inline Complex random_nonzero_scalar(Rng& r) {
  const double mod = std::exp(uniform(r, -5.0, 5.0));
  return std::polar(mod, uniform(r, -detail::pi, detail::pi));
}

/// Density matrix with eigenvalues {w, 1-w} and dominant eigenvector s.
inline DensityMatrix random_mixture(Rng& r, const BlochState& s) {
  return DensityMatrix::mixture(uniform(r, 0.55, 0.99), s);
}

/// Smallest absolute difference of two angles modulo `period`.
inline double angle_distance(double a, double b, double period = detail::two_pi) {
  const double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

// Reference matrices for the closed-form exponential.
using Mat = std::array<std::array<Complex, 2>, 2>;

inline Mat generator(const PauliVector& h) {
  return {{{Complex(h.g3), Complex(h.g1, -h.g2)}, {Complex(h.g1, h.g2), Complex(-h.g3)}}};
}

inline Mat mul(const Mat& a, const Mat& b) {
  Mat r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

/// sum_{k<20} (-i H t)^k / k!
inline Mat series_exp(const PauliVector& h, double t) {
  Mat x = generator(h);
  for (auto& row : x)
    for (auto& z : row) z *= Complex(0.0, -t);
  Mat term{{{Complex(1.0), Complex(0.0)}, {Complex(0.0), Complex(1.0)}}};
  Mat sum = term;
  for (int k = 1; k < 20; ++k) {
    term = mul(term, x);
    for (auto& row : term)
      for (auto& z : row) z /= static_cast<double>(k);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) sum[i][j] += term[i][j];
  }
  return sum;
}

inline double diff(const Unitary2& u, const Mat& m) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(u(i, j) - m[i][j]));
  return d;
}

/// Five-point finite-difference Euler-angle rates of t -> pauli_exp(h, t) u0.
/// tau3 and tau3p may jump by pi together at the arg branch cut, so their
/// offsets from the centre value are reduced modulo pi.
inline EulerRates euler_rates_fd(const PauliVector& h, const Unitary2& u0, double t, double step) {
  const EulerAngles mid = euler_decompose(pauli_exp(h, t) * u0);
  auto unwrap = [](double d) { return d - detail::pi * std::round(d / detail::pi); };
  EulerAngles e[4];
  const double offsets[4] = {-2.0, -1.0, 1.0, 2.0};
  for (int k = 0; k < 4; ++k) {
    const EulerAngles a = euler_decompose(pauli_exp(h, t + offsets[k] * step) * u0);
    e[k] = {unwrap(a.tau3 - mid.tau3), a.tau1 - mid.tau1, unwrap(a.tau3p - mid.tau3p)};
  }
  auto d = [&](double EulerAngles::*f) {
    return (e[0].*f - 8.0 * (e[1].*f) + 8.0 * (e[2].*f) - e[3].*f) / (12.0 * step);
  };
  return {d(&EulerAngles::tau1), d(&EulerAngles::tau3p), d(&EulerAngles::tau3)};
}

}  // namespace qopt::testing

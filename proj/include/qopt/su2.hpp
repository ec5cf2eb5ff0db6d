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

// Exact SU(2) algebra for traceless two-level Hamiltonians
//
//   H = g3 sigma_3 + g1 sigma_1 + g2 sigma_2      (hbar = 1)
//
// Every propagator in the library is a product of closed-form exponentials of
// this kind, so nothing here integrates an ODE.

#include <array>
#include <cmath>
#include <complex>
#include <tuple>

#include "qopt/detail/angles.hpp"
#include "qopt/error.hpp"

namespace qopt {

using Complex = std::complex<double>;

/// A pair of complex amplitudes (a0, a1) in the {|0>, |1>} basis.
using Spinor = std::array<Complex, 2>;

/// Coefficients of a traceless Hermitian generator in the (sigma_3, sigma_1,
/// sigma_2) basis. The ordering follows the Hamiltonian's customary
/// Gamma / omega_1 / omega_2 labelling.
struct PauliVector {
  double g3 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;

  double norm() const { return std::sqrt(g3 * g3 + g1 * g1 + g2 * g2); }
  bool finite() const { return std::isfinite(g3) && std::isfinite(g1) && std::isfinite(g2); }

  friend PauliVector operator+(PauliVector a, PauliVector b) { return {a.g3 + b.g3, a.g1 + b.g1, a.g2 + b.g2}; }
  friend PauliVector operator-(PauliVector a, PauliVector b) { return {a.g3 - b.g3, a.g1 - b.g1, a.g2 - b.g2}; }
  friend PauliVector operator*(double s, PauliVector a) { return {s * a.g3, s * a.g1, s * a.g2}; }
  friend bool operator==(const PauliVector&, const PauliVector&) = default;
};

inline double dot(PauliVector a, PauliVector b) { return a.g3 * b.g3 + a.g1 * b.g1 + a.g2 * b.g2; }

/// 2x2 special-unitary matrix, row major.
class Unitary2 {
 public:
  Unitary2() : m_{Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)} {}

  static Unitary2 identity() { return {}; }

  /// Builds from raw entries and rescales by 1/sqrt(det) so that det = 1.
  static Unitary2 from_entries(Complex u00, Complex u01, Complex u10, Complex u11) {
    Unitary2 u;
    u.m_ = {u00, u01, u10, u11};
    u.normalize_det();
    return u;
  }

  const Complex& operator()(int row, int col) const { return m_[static_cast<std::size_t>(2 * row + col)]; }

  Complex det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  Unitary2 adjoint() const {
    Unitary2 a;
    a.m_ = {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
    return a;
  }

  Unitary2 operator-() const {
    Unitary2 a;
    a.m_ = {-m_[0], -m_[1], -m_[2], -m_[3]};
    return a;
  }

  Spinor apply(const Spinor& v) const { return {m_[0] * v[0] + m_[1] * v[1], m_[2] * v[0] + m_[3] * v[1]}; }

  /// Raw matrix product without renormalization.
  Unitary2 multiply_raw(const Unitary2& b) const {
    Unitary2 p;
    p.m_ = {m_[0] * b.m_[0] + m_[1] * b.m_[2], m_[0] * b.m_[1] + m_[1] * b.m_[3],
            m_[2] * b.m_[0] + m_[3] * b.m_[2], m_[2] * b.m_[1] + m_[3] * b.m_[3]};
    return p;
  }

  /// Largest entrywise modulus of (this - other).
  double max_abs_diff(const Unitary2& other) const {
    double d = 0.0;
    for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(m_[i] - other.m_[i]));
    return d;
  }

  /// min over the sign ambiguity of max_abs_diff.
  double distance_up_to_sign(const Unitary2& other) const {
    return std::min(max_abs_diff(other), max_abs_diff(-other));
  }

  /// ||U^dagger U - 1||_max.
  double unitarity_defect() const { return adjoint().multiply_raw(*this).max_abs_diff(identity()); }

 private:
  void normalize_det() {
    const Complex root = std::sqrt(det());
    if (std::abs(root) == 0.0) throw InvalidArgument("Unitary2: singular matrix");
    for (auto& z : m_) z /= root;
  }

  std::array<Complex, 4> m_;
};

/// exp(-i (h . sigma) t), evaluated as cos(|h| t) 1 - i sin(|h| t) h_hat . sigma.
inline Unitary2 pauli_exp(PauliVector h, double t) {
  if (!h.finite() || !std::isfinite(t)) throw InvalidArgument("pauli_exp: non-finite input");
  if (t < 0.0) throw InvalidArgument("pauli_exp: negative duration");
  const double n = h.norm();
  if (n == 0.0 || t == 0.0) return Unitary2::identity();
  const double c = std::cos(n * t);
  const double s = std::sin(n * t) / n;
  // h . sigma = [[g3, g1 - i g2], [g1 + i g2, -g3]]
  return Unitary2::from_entries(Complex(c, -s * h.g3), Complex(-s * h.g2, -s * h.g1),
                                Complex(s * h.g2, -s * h.g1), Complex(c, s * h.g3));
}

/// exp(-i angle (n . sigma)) for a possibly negative angle. `axis` need not be
/// normalized; its norm scales the angle.
inline Unitary2 rotation_exp(PauliVector axis, double angle) {
  if (angle < 0.0) return pauli_exp(-1.0 * axis, -angle);
  return pauli_exp(axis, angle);
}

/// Matrix product a * b, renormalized to det = 1.
inline Unitary2 compose(const Unitary2& a, const Unitary2& b) {
  const Unitary2 p = a.multiply_raw(b);
  return Unitary2::from_entries(p(0, 0), p(0, 1), p(1, 0), p(1, 1));
}

inline Unitary2 operator*(const Unitary2& a, const Unitary2& b) { return compose(a, b); }

inline Unitary2 adjoint(const Unitary2& u) { return u.adjoint(); }

/// |<f|U|in>|^2 for normalized spinors.
inline double transfer_fidelity(const Unitary2& u, const Spinor& psi_in, const Spinor& psi_f) {
  const Spinor out = u.apply(psi_in);
  const Complex overlap = std::conj(psi_f[0]) * out[0] + std::conj(psi_f[1]) * out[1];
  return std::min(1.0, std::norm(overlap));
}

/// Euler angles of U = exp(-i s3 tau3/2) exp(-i s1 tau1/2) exp(-i s3 tau3p/2).
struct EulerAngles {
  double tau3 = 0.0;
  double tau1 = 0.0;
  double tau3p = 0.0;
};

inline Unitary2 recompose(const EulerAngles& e) {
  const PauliVector z{1.0, 0.0, 0.0};
  const PauliVector x{0.0, 1.0, 0.0};
  return rotation_exp(z, e.tau3 / 2.0) * rotation_exp(x, e.tau1 / 2.0) * rotation_exp(z, e.tau3p / 2.0);
}

/// Decomposes u (up to sign) into Euler angles. tau1 is returned in [0, pi],
/// which lies inside the customary [0, 2 pi); tau3 and tau3p in [0, 4 pi).
/// When sin(tau1) = 0 the second sigma_3 angle is set to zero and the whole
/// sigma_3 rotation is carried by tau3.
inline EulerAngles euler_decompose(const Unitary2& u) {
  // u00 = e^{-i(t3+t3p)/2} cos(t1/2),  u01 = -i e^{-i(t3-t3p)/2} sin(t1/2)
  constexpr double degenerate = 1e-12;
  const double c = std::abs(u(0, 0));
  const double s = std::abs(u(0, 1));
  EulerAngles e;
  e.tau1 = 2.0 * std::atan2(s, c);
  const double sum = -2.0 * std::arg(u(0, 0));
  const double diff = -2.0 * std::arg(Complex(0.0, 1.0) * u(0, 1));
  if (s < degenerate) {
    e.tau1 = 0.0;
    e.tau3 = sum;
    e.tau3p = 0.0;
  } else if (c < degenerate) {
    e.tau1 = detail::pi;
    e.tau3 = diff;
    e.tau3p = 0.0;
  } else {
    e.tau3 = 0.5 * (sum + diff);
    e.tau3p = 0.5 * (sum - diff);
  }
  e.tau3 = detail::wrap_positive(e.tau3, 2.0 * detail::two_pi);
  e.tau3p = detail::wrap_positive(e.tau3p, 2.0 * detail::two_pi);
  return e;
}

struct EulerRates {
  double dtau1 = 0.0;
  double dtau3p = 0.0;
  double dtau3 = 0.0;
};

/// Right-hand side of the Euler-angle equations of motion for
/// dU/dt = -i (Gamma s3 + w1 s1 + w2 s2) U.
inline EulerRates euler_ode_rhs(const EulerAngles& angles, PauliVector controls) {
  const double sin1 = std::sin(angles.tau1);
  if (std::abs(sin1) < 1e-9) throw SingularityError("euler_ode_rhs: sin(tau1) vanishes");
  const double cos3 = std::cos(angles.tau3);
  const double sin3 = std::sin(angles.tau3);
  const double w_r = controls.g1 * cos3 + controls.g2 * sin3;    // omega . e_r
  const double w_phi = -controls.g1 * sin3 + controls.g2 * cos3;  // omega . e_phi
  return {2.0 * w_r, -2.0 * w_phi / sin1, 2.0 * controls.g3 + 2.0 * w_phi * std::cos(angles.tau1) / sin1};
}

}  // namespace qopt

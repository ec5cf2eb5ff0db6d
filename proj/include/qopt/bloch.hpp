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

#include <array>
#include <cmath>
#include <utility>

#include "qopt/detail/angles.hpp"
#include "qopt/error.hpp"
#include "qopt/su2.hpp"

namespace qopt {

/// Pure qubit state as a point on the Bloch sphere, with the global phase
/// fixed so that the |0> amplitude is real and non-negative.
///
/// theta lies in [0, pi] and phi in [0, 2 pi). At the poles phi is set to 0.
class BlochState {
 public:
  static constexpr double pole_threshold = 1e-14;

  BlochState() = default;

  /// Canonicalizes phi into [0, 2 pi); rejects theta outside [0, pi].
  BlochState(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) throw InvalidArgument("BlochState: non-finite angle");
    theta = detail::clamp_guarded(theta, 0.0, detail::pi);
    if (theta < 0.0 || theta > detail::pi) throw InvalidArgument("BlochState: theta outside [0, pi]");
    theta_ = theta;
    phi_ = detail::wrap_positive(phi, detail::two_pi);
    if (std::sin(theta_ / 2.0) < pole_threshold || std::cos(theta_ / 2.0) < pole_threshold) phi_ = 0.0;
  }

  static BlochState north() { return {0.0, 0.0}; }
  static BlochState south() { return {detail::pi, 0.0}; }

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  /// Cartesian Bloch vector (x, y, z).
  std::array<double, 3> vector() const {
    return {std::sin(theta_) * std::cos(phi_), std::sin(theta_) * std::sin(phi_), std::cos(theta_)};
  }

  /// The orthogonal state, antipodal on the sphere.
  BlochState antipode() const { return {detail::pi - theta_, phi_ + detail::pi}; }

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// (cos theta/2, e^{i phi} sin theta/2).
inline Spinor bloch_to_amplitudes(const BlochState& s) {
  return {Complex(std::cos(s.theta() / 2.0), 0.0), std::polar(std::sin(s.theta() / 2.0), s.phi())};
}

/// Accepts unnormalized amplitudes; any common complex factor drops out.
inline BlochState amplitudes_to_bloch(Complex a0, Complex a1) {
  const double m0 = std::abs(a0);
  const double m1 = std::abs(a1);
  const double n = std::hypot(m0, m1);
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("amplitudes_to_bloch: zero or non-finite vector");
  const double theta = 2.0 * std::atan2(m1, m0);
  if (m0 / n < BlochState::pole_threshold || m1 / n < BlochState::pole_threshold) {
    return {m0 >= m1 ? 0.0 : detail::pi, 0.0};
  }
  return {theta, std::arg(a1) - std::arg(a0)};
}

inline BlochState amplitudes_to_bloch(const Spinor& v) { return amplitudes_to_bloch(v[0], v[1]); }

inline BlochState bloch_from_vector(const std::array<double, 3>& r) {
  const double n = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  if (!(n > 0.0)) throw InvalidArgument("bloch_from_vector: zero vector");
  const double theta = detail::safe_acos(r[2] / n);
  return {theta, std::atan2(r[1], r[0])};
}

/// Fidelity between two pure states, |<a|b>|^2.
inline double state_fidelity(const BlochState& a, const BlochState& b) {
  return transfer_fidelity(Unitary2::identity(), bloch_to_amplitudes(a), bloch_to_amplitudes(b));
}

inline double transfer_fidelity(const Unitary2& u, const BlochState& psi_in, const BlochState& psi_f) {
  return transfer_fidelity(u, bloch_to_amplitudes(psi_in), bloch_to_amplitudes(psi_f));
}

inline BlochState evolve(const Unitary2& u, const BlochState& s) {
  return amplitudes_to_bloch(u.apply(bloch_to_amplitudes(s)));
}

/// Hermitian, unit-trace, positive 2x2 matrix.
class DensityMatrix {
 public:
  static constexpr double tolerance = 1e-12;

  DensityMatrix() : m_{Complex(1.0), Complex(0.0), Complex(0.0), Complex(0.0)} {}

  static DensityMatrix from_entries(Complex r00, Complex r01, Complex r10, Complex r11) {
    DensityMatrix d;
    d.m_ = {r00, r01, r10, r11};
    d.validate();
    return d;
  }

  /// |s><s|.
  static DensityMatrix projector(const BlochState& s) {
    const Spinor v = bloch_to_amplitudes(s);
    return from_entries(v[0] * std::conj(v[0]), v[0] * std::conj(v[1]), v[1] * std::conj(v[0]),
                        v[1] * std::conj(v[1]));
  }

  /// weight |s><s| + (1 - weight) |s_perp><s_perp|.
  static DensityMatrix mixture(double weight, const BlochState& s) {
    const auto r = s.vector();
    const double p = 2.0 * weight - 1.0;
    return from_bloch_vector({p * r[0], p * r[1], p * r[2]});
  }

  /// (1 + r . sigma) / 2; requires |r| <= 1.
  static DensityMatrix from_bloch_vector(const std::array<double, 3>& r) {
    return from_entries(Complex(0.5 * (1.0 + r[2])), Complex(0.5 * r[0], -0.5 * r[1]), Complex(0.5 * r[0], 0.5 * r[1]),
                        Complex(0.5 * (1.0 - r[2])));
  }

  const Complex& operator()(int row, int col) const { return m_[static_cast<std::size_t>(2 * row + col)]; }

  std::array<double, 3> bloch_vector() const {
    return {2.0 * m_[2].real(), 2.0 * m_[2].imag(), (m_[0] - m_[3]).real()};
  }

  /// U rho U^dagger.
  DensityMatrix conjugated(const Unitary2& u) const {
    const Unitary2& a = u;
    std::array<Complex, 4> t{};
    // t = U rho
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t[static_cast<std::size_t>(2 * i + j)] = a(i, 0) * (*this)(0, j) + a(i, 1) * (*this)(1, j);
    std::array<Complex, 4> r{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        r[static_cast<std::size_t>(2 * i + j)] =
            t[static_cast<std::size_t>(2 * i)] * std::conj(a(j, 0)) + t[static_cast<std::size_t>(2 * i + 1)] * std::conj(a(j, 1));
    DensityMatrix d;
    d.m_ = r;
    return d;
  }

  double max_abs_diff(const DensityMatrix& o) const {
    double d = 0.0;
    for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(m_[i] - o.m_[i]));
    return d;
  }

 private:
  void validate() const {
    for (const auto& z : m_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidArgument("DensityMatrix: non-finite entry");
    if (std::abs(m_[1] - std::conj(m_[2])) > tolerance || std::abs(m_[0].imag()) > tolerance ||
        std::abs(m_[3].imag()) > tolerance)
      throw InvalidArgument("DensityMatrix: not Hermitian");
    if (std::abs((m_[0] + m_[3]).real() - 1.0) > tolerance) throw InvalidArgument("DensityMatrix: trace != 1");
    const auto r = bloch_vector();
    if (std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]) > 1.0 + tolerance)
      throw InvalidArgument("DensityMatrix: eigenvalue outside [0, 1]");
  }

  std::array<Complex, 4> m_;
};

struct EigenPair {
  double value = 0.0;
  BlochState vector;
};

/// Eigenpairs sorted by descending eigenvalue. The eigenvectors are antipodal
/// on the Bloch sphere. Throws DegenerateSpectrum when rho is proportional to
/// the identity.
inline std::pair<EigenPair, EigenPair> density_eigendecomposition(const DensityMatrix& rho) {
  const auto r = rho.bloch_vector();
  const double len = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  if (len < 1e-12) throw DegenerateSpectrum("density_eigendecomposition: rho is proportional to the identity");
  const BlochState major = bloch_from_vector(r);
  return {EigenPair{0.5 * (1.0 + len), major}, EigenPair{0.5 * (1.0 - len), major.antipode()}};
}

/// Unit 3-vector; used for rotation axes on the Bloch sphere.
struct RotationAxis {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  /// Polar angle of the axis, in [0, pi].
  double polar_angle() const { return detail::safe_acos(z); }
};

/// Axis of the bang Hamiltonian sign*c s3 + omega s1: (omega, 0, sign c) / rho.
inline RotationAxis theta_c_axis(double c, double omega, int sign) {
  if (!std::isfinite(c) || !std::isfinite(omega) || c < 0.0 || omega < 0.0)
    throw InvalidArgument("theta_c_axis: c and omega must be finite and non-negative");
  if (c == 0.0 && omega == 0.0) throw InvalidArgument("theta_c_axis: c = omega = 0");
  if (sign != 1 && sign != -1) throw InvalidArgument("theta_c_axis: sign must be +1 or -1");
  const double rho = std::hypot(c, omega);
  return {omega / rho, 0.0, sign * c / rho};
}

}  // namespace qopt

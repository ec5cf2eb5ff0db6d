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

// Time-optimal transfer for H = Gamma(t) s3 + omega s1 with Gamma unbounded.
//
// The optimal protocol is a sigma_3 kick, free rotation about x for
// T_min = |theta_f - theta_in| / (2 omega), and a second sigma_3 kick.

#include <cmath>
#include <optional>

#include "qopt/bloch.hpp"
#include "qopt/detail/angles.hpp"
#include "qopt/error.hpp"
#include "qopt/protocol.hpp"
#include "qopt/simulator.hpp"
#include "qopt/su2.hpp"

namespace qopt {

namespace detail {

inline void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) throw InvalidArgument(std::string(what) + " must be finite and positive");
}

/// Coefficients of V (p . sigma) V^dagger.
inline PauliVector conjugate(const PauliVector& p, const Unitary2& v) {
  const Complex m[2][2] = {{Complex(p.g3), Complex(p.g1, -p.g2)}, {Complex(p.g1, p.g2), Complex(-p.g3)}};
  Complex a[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a[i][j] = v(i, 0) * m[0][j] + v(i, 1) * m[1][j];
  // b = a V^dagger; only b00 and b10 are needed
  const Complex b00 = a[0][0] * std::conj(v(0, 0)) + a[0][1] * std::conj(v(0, 1));
  const Complex b10 = a[1][0] * std::conj(v(0, 0)) + a[1][1] * std::conj(v(0, 1));
  return {b00.real(), b10.real(), b10.imag()};
}

}  // namespace detail

/// Optimal kick / rotate / kick protocol for unbounded Gamma and fixed omega.
///
/// Kick angles are reduced mod pi into (-pi/2, pi/2]. When theta_in equals
/// theta_f the protocol degenerates to a single kick followed by an empty
/// rotation segment.
inline Protocol solve_unconstrained(const BlochState& psi_in, const BlochState& psi_f, double omega) {
  detail::require_positive(omega, "solve_unconstrained: omega");
  const double ti = psi_in.theta();
  const double tf = psi_f.theta();
  const double pi_ = psi_in.phi();
  const double pf = psi_f.phi();
  const PauliVector drive{0.0, omega, 0.0};

  if (ti == tf) {
    const double kick = detail::wrap_half_open_pi(0.5 * (pf - pi_));
    return Protocol({kick3(kick), Constant{drive, 0.0}});
  }

  double alpha_in = 0.0;
  double alpha_f = 0.0;
  if (ti > tf) {
    alpha_in = detail::pi / 4.0 - pi_ / 2.0;
    alpha_f = -detail::pi / 4.0 + pf / 2.0;
  } else {
    alpha_in = -detail::pi / 4.0 - pi_ / 2.0;
    alpha_f = detail::pi / 4.0 + pf / 2.0;
  }
  const double t_min = std::abs(tf - ti) / (2.0 * omega);
  return Protocol({kick3(detail::wrap_half_open_pi(alpha_in)), Constant{drive, t_min},
                   kick3(detail::wrap_half_open_pi(alpha_f))});
}

/// Minimal time from the amplitude overlap, cos(omega T) = |f0 i0| + |f1 i1|.
///
/// arccos is evaluated as atan2(sin, cos) with the sine taken from the same
/// amplitude moduli, which keeps full precision for nearly equal states.
inline double t_min_overlap(const Spinor& psi_in, const Spinor& psi_f, double omega) {
  detail::require_positive(omega, "t_min_overlap: omega");
  const double ni = std::hypot(std::abs(psi_in[0]), std::abs(psi_in[1]));
  const double nf = std::hypot(std::abs(psi_f[0]), std::abs(psi_f[1]));
  if (!(ni > 0.0) || !(nf > 0.0)) throw InvalidArgument("t_min_overlap: zero state vector");
  const double i0 = std::abs(psi_in[0]) / ni;
  const double i1 = std::abs(psi_in[1]) / ni;
  const double f0 = std::abs(psi_f[0]) / nf;
  const double f1 = std::abs(psi_f[1]) / nf;
  const double cos_t = detail::clamp_guarded(f0 * i0 + f1 * i1, -1.0, 1.0);
  const double sin_t = std::abs(f1 * i0 - f0 * i1);
  return std::atan2(sin_t, cos_t) / omega;
}

inline double t_min_overlap(const BlochState& psi_in, const BlochState& psi_f, double omega) {
  return t_min_overlap(bloch_to_amplitudes(psi_in), bloch_to_amplitudes(psi_f), omega);
}

/// Basis change used when a transverse coupling is the unbounded control.
/// Returns V with V s3 V^dag = s_control and V s1 V^dag = s3.
inline Unitary2 permutation_frame(int control_axis) {
  switch (control_axis) {
    case 3: return Unitary2::identity();
    case 1: {
      // pi rotation about (x + z)/sqrt(2): x <-> z, y -> -y
      const double r = 1.0 / std::sqrt(2.0);
      return rotation_exp({r, r, 0.0}, detail::pi / 2.0);
    }
    case 2: {
      // -2 pi/3 rotation about (1,1,1)/sqrt(3): x -> z -> y -> x
      const double r = 1.0 / std::sqrt(3.0);
      return rotation_exp({r, r, r}, -detail::pi / 3.0);
    }
    default: throw InvalidArgument("permutation_frame: control axis must be 1, 2 or 3");
  }
}

/// Unconstrained solve where sigma_{control_axis} carries the unbounded
/// control and `fixed_coupling` multiplies sigma_3 (or sigma_1 when the
/// control is sigma_3 itself). Kicks are emitted along the control axis.
inline Protocol solve_unconstrained_permuted(const BlochState& psi_in, const BlochState& psi_f, double fixed_coupling,
                                             int control_axis) {
  const Unitary2 v = permutation_frame(control_axis);
  if (control_axis == 3) return solve_unconstrained(psi_in, psi_f, fixed_coupling);
  const Unitary2 vd = v.adjoint();
  const Protocol primed = solve_unconstrained(evolve(vd, psi_in), evolve(vd, psi_f), fixed_coupling);
  Protocol out;
  for (const auto& seg : primed.segments()) {
    if (const auto* k = std::get_if<Kick>(&seg)) {
      PauliVector axis = detail::conjugate(k->axis, v);
      axis = (1.0 / axis.norm()) * axis;
      out.push_back(Kick{axis, k->angle});
    } else {
      const auto& c = std::get<Constant>(seg);
      out.push_back(Constant{detail::conjugate(c.controls, v), c.duration});
    }
  }
  return out;
}

namespace detail {

struct SpectralPair {
  EigenPair in;
  EigenPair f;
};

/// Shared spectrum check for density-matrix transport. Returns nullopt when
/// both matrices are maximally mixed (every unitary already works).
inline std::optional<SpectralPair> matched_spectra(const DensityMatrix& rho_in, const DensityMatrix& rho_f) {
  std::optional<EigenPair> in;
  std::optional<EigenPair> f;
  try {
    in = density_eigendecomposition(rho_in).first;
  } catch (const DegenerateSpectrum&) {
  }
  try {
    f = density_eigendecomposition(rho_f).first;
  } catch (const DegenerateSpectrum&) {
  }
  if (!in && !f) return std::nullopt;
  if (!in || !f || std::abs(in->value - f->value) > 1e-10)
    throw NotUnitarilyReachable("density matrices have different spectra");
  return SpectralPair{*in, *f};
}

inline void check_density_transport(const Protocol& p, const DensityMatrix& rho_in, const DensityMatrix& rho_f) {
  const double err = rho_in.conjugated(propagate_exact(p)).max_abs_diff(rho_f);
  if (err > 1e-9) throw ProtocolInconsistency("density transport misses the target by " + std::to_string(err));
}

}  // namespace detail

/// Density-matrix transport: the optimal protocol for the dominant
/// eigenvectors is optimal for the whole matrix.
inline Protocol solve_unconstrained_density(const DensityMatrix& rho_in, const DensityMatrix& rho_f, double omega) {
  detail::require_positive(omega, "solve_unconstrained_density: omega");
  const auto spectra = detail::matched_spectra(rho_in, rho_f);
  if (!spectra) return {};
  Protocol p = solve_unconstrained(spectra->in.vector, spectra->f.vector, omega);
  detail::check_density_transport(p, rho_in, rho_f);
  return p;
}

}  // namespace qopt

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

// Several transverse controls. With Gamma unconstrained, omega_1 and omega_2
// held at their bounds act as a single sigma_1 coupling of strength
// |omega_max| seen through a sigma_3 frame rotation by phi = atan2(w2, w1):
//
//   exp(-i (w1 s1 + w2 s2) T) = e^{-i phi s3 / 2} e^{-i |w| s1 T} e^{+i phi s3 / 2}.
//
// The frame rotation is absorbed into the two kicks.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "qopt/bloch.hpp"
#include "qopt/detail/angles.hpp"
#include "qopt/error.hpp"
#include "qopt/protocol.hpp"
#include "qopt/unconstrained.hpp"

namespace qopt {

/// Control bounds; an absent gamma_max means Gamma is unconstrained. In the
/// single-unconstrained reduction an absent omega2_max means the sigma_2
/// channel is not driven.
struct ControlBounds {
  std::optional<double> gamma_max;
  std::optional<double> omega1_max;
  std::optional<double> omega2_max;

  void validate() const {
    for (const auto& b : {gamma_max, omega1_max, omega2_max})
      if (b && (!std::isfinite(*b) || *b < 0.0)) throw InvalidArgument("ControlBounds: bounds must be finite and >= 0");
  }
  bool trivial() const { return !gamma_max && !omega1_max && !omega2_max; }
};

struct ReducedCoupling {
  double effective_omega = 0.0;
  double phase = 0.0;
};

inline ReducedCoupling reduce_two_constrained(double omega1_max, double omega2_max) {
  detail::require_positive(omega1_max, "reduce_two_constrained: omega1_max");
  detail::require_positive(omega2_max, "reduce_two_constrained: omega2_max");
  return {std::hypot(omega1_max, omega2_max), std::atan2(omega2_max, omega1_max)};
}

/// Gamma unconstrained, omega_1 (and optionally omega_2) bounded.
inline Protocol solve_one_unconstrained(const BlochState& psi_in, const BlochState& psi_f, const ControlBounds& bounds) {
  bounds.validate();
  if (bounds.gamma_max) throw InvalidArgument("solve_one_unconstrained: gamma must be unconstrained");
  if (!bounds.omega1_max) throw ZeroTimeTrivial("two unconstrained controls: minimal time is zero");
  const double w1 = *bounds.omega1_max;
  const double w2 = bounds.omega2_max.value_or(0.0);
  if (!(w2 > 0.0)) return solve_unconstrained(psi_in, psi_f, w1);
  const double w = std::hypot(w1, w2);
  const double phase = std::atan2(w2, w1);
  const Protocol base = solve_unconstrained(psi_in, psi_f, w);
  std::vector<PulseSegment> segs;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const PulseSegment& s = base.segments()[i];
    if (const auto* k = std::get_if<Kick>(&s)) {
      const double shift = i == 0 ? phase / 2.0 : -phase / 2.0;
      segs.push_back(kick3(detail::wrap_half_open_pi(k->angle + shift)));
    } else {
      segs.push_back(Constant{{0.0, w1, w2}, std::get<Constant>(s).duration});
    }
  }
  return Protocol(std::move(segs));
}

inline Protocol solve_one_unconstrained_density(const DensityMatrix& rho_in, const DensityMatrix& rho_f,
                                               const ControlBounds& bounds) {
  const auto spectra = detail::matched_spectra(rho_in, rho_f);
  if (!spectra) return {};
  Protocol p = solve_one_unconstrained(spectra->in.vector, spectra->f.vector, bounds);
  detail::check_density_transport(p, rho_in, rho_f);
  return p;
}

struct CandidateHamiltonian {
  PauliVector controls;
  bool operator==(const CandidateHamiltonian&) const = default;
};

/// All (0|+-Gamma, 0|+-w1, 0|+-w2) with at most one zero component, in the
/// fixed order +, -, 0 per channel (g3 slowest).
inline std::vector<CandidateHamiltonian> enumerate_candidates(const ControlBounds& bounds) {
  bounds.validate();
  if (!bounds.gamma_max || !bounds.omega1_max || !bounds.omega2_max)
    throw InvalidArgument("enumerate_candidates: all three bounds required");
  const double g = *bounds.gamma_max;
  const double a = *bounds.omega1_max;
  const double b = *bounds.omega2_max;
  if (!(g > 0.0) || !(a > 0.0) || !(b > 0.0)) throw InvalidArgument("enumerate_candidates: bounds must be positive");
  const double signs[3] = {1.0, -1.0, 0.0};
  std::vector<CandidateHamiltonian> out;
  for (double s3 : signs)
    for (double s1 : signs)
      for (double s2 : signs) {
        const int zeros = (s3 == 0.0) + (s1 == 0.0) + (s2 == 0.0);
        if (zeros > 1) continue;
        out.push_back({{s3 * g, s1 * a, s2 * b}});
      }
  return out;
}

}  // namespace qopt

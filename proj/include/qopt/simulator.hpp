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

// Propagation of protocols: exact products of constant-generator exponentials,
// and a finite-switching-time model in which every internal change of the
// controls is replaced by a ramp of duration epsilon.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "qopt/bloch.hpp"
#include "qopt/detail/angles.hpp"
#include "qopt/error.hpp"
#include "qopt/protocol.hpp"
#include "qopt/su2.hpp"

namespace qopt {

/// Product of the segment propagators, latest segment leftmost.
inline Unitary2 propagate_exact(const Protocol& p) {
  Unitary2 u;
  for (const auto& seg : p.segments()) u = segment_propagator(seg) * u;
  return u;
}

enum class RampShape { Linear, Smoothstep, QuarterSine, Custom };

/// Switching model. The ramp profile s maps [0, 1] onto [0, 1] with s(0) = 0
/// and s(1) = 1; a Custom profile is sampled on a uniform grid and linearly
/// interpolated.
struct RampSpec {
  double epsilon = 0.0;
  RampShape shape = RampShape::Linear;
  std::vector<double> profile;

  static RampSpec linear(double eps) { return {eps, RampShape::Linear, {}}; }
  static RampSpec smoothstep(double eps) { return {eps, RampShape::Smoothstep, {}}; }
  static RampSpec quarter_sine(double eps) { return {eps, RampShape::QuarterSine, {}}; }
  static RampSpec custom(double eps, std::vector<double> samples) {
    RampSpec r{eps, RampShape::Custom, std::move(samples)};
    r.validate();
    return r;
  }

  void validate() const {
    if (!std::isfinite(epsilon) || epsilon < 0.0) throw InvalidArgument("RampSpec: epsilon must be >= 0");
    if (shape != RampShape::Custom) return;
    if (profile.size() < 2) throw InvalidArgument("RampSpec: custom profile needs at least two samples");
    if (std::abs(profile.front()) > 1e-12 || std::abs(profile.back() - 1.0) > 1e-12)
      throw InvalidArgument("RampSpec: custom profile must start at 0 and end at 1");
    for (double v : profile)
      if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("RampSpec: custom profile values must lie in [0, 1]");
  }

  double operator()(double tau) const {
    tau = std::clamp(tau, 0.0, 1.0);
    switch (shape) {
      case RampShape::Linear: return tau;
      case RampShape::Smoothstep: return tau * tau * (3.0 - 2.0 * tau);
      case RampShape::QuarterSine: return std::sin(0.5 * detail::pi * tau);
      case RampShape::Custom: {
        const double x = tau * static_cast<double>(profile.size() - 1);
        const auto i = std::min(static_cast<std::size_t>(x), profile.size() - 2);
        const double f = x - static_cast<double>(i);
        return (1.0 - f) * profile[i] + f * profile[i + 1];
      }
    }
    return tau;
  }
};

namespace detail {

inline std::vector<PulseSegment> drop_empty_constants(const Protocol& p) {
  std::vector<PulseSegment> out;
  for (const auto& s : p.segments()) {
    const auto* c = std::get_if<Constant>(&s);
    if (c != nullptr && c->duration == 0.0) continue;
    out.push_back(s);
  }
  return out;
}

/// Largest transverse coupling and largest sigma_3 coupling over the
/// protocol's constant segments.
inline std::pair<double, double> coupling_scales(const Protocol& p) {
  double omega = 0.0;
  double c = 0.0;
  for (const auto& s : p.segments()) {
    if (const auto* k = std::get_if<Constant>(&s)) {
      omega = std::max(omega, std::hypot(k->controls.g1, k->controls.g2));
      c = std::max(c, std::abs(k->controls.g3));
    }
  }
  return {omega, c};
}

}  // namespace detail

/// Sub-step used when none is given: epsilon/100, capped at 1e-3 / max(omega, c).
inline double default_substep(const Protocol& p, double epsilon) {
  const auto [omega, c] = detail::coupling_scales(p);
  const double scale = std::max(omega, c);
  double dt = epsilon / 100.0;
  if (scale > 0.0) dt = std::min(dt, 1e-3 / scale);
  return dt;
}

/// Expands a protocol into the piecewise-constant schedule actually applied
/// under finite switching:
///  - zero-duration constant segments are dropped;
///  - between two consecutive constant segments with different controls a
///    ramp of duration epsilon is inserted, discretized into sub-steps of
///    length <= dt that hold the control value at the sub-step midpoint;
///  - a kick becomes a pulse of area equal to its angle (taken as the mod-pi
///    representative of smallest magnitude) spread over epsilon, on top of the
///    transverse controls of the neighbouring constant segment.
/// With epsilon = 0 the protocol is returned unchanged.
inline Protocol ramped_protocol(const Protocol& p, const RampSpec& ramp, double dt) {
  ramp.validate();
  const double eps = ramp.epsilon;
  if (eps == 0.0) return p;
  if (!(dt > 0.0)) throw InvalidArgument("ramped_protocol: dt must be positive");
  if (dt > eps / 20.0 * (1.0 + 1e-12)) throw InvalidArgument("ramped_protocol: dt must not exceed epsilon/20");

  const auto segs = detail::drop_empty_constants(p);
  const auto steps = static_cast<std::size_t>(std::ceil(eps / dt - 1e-9));
  const double h = eps / static_cast<double>(steps);

  auto neighbour_controls = [&](std::size_t i) -> PauliVector {
    for (std::size_t j = i + 1; j < segs.size(); ++j)
      if (const auto* c = std::get_if<Constant>(&segs[j])) return c->controls;
    for (std::size_t j = i; j-- > 0;)
      if (const auto* c = std::get_if<Constant>(&segs[j])) return c->controls;
    return {};
  };

  Protocol out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (const auto* k = std::get_if<Kick>(&segs[i])) {
      const double angle = detail::wrap_half_open_pi(k->angle);
      PauliVector bg = neighbour_controls(i);
      bg = bg - dot(bg, k->axis) * k->axis;
      out.push_back(Constant{(angle / eps) * k->axis + bg, eps});
      continue;
    }
    const auto& cur = std::get<Constant>(segs[i]);
    out.push_back(cur);
    if (i + 1 < segs.size()) {
      if (const auto* next = std::get_if<Constant>(&segs[i + 1]); next != nullptr && !(next->controls == cur.controls)) {
        const PauliVector delta = next->controls - cur.controls;
        for (std::size_t s = 0; s < steps; ++s) {
          const double tau = (static_cast<double>(s) + 0.5) / static_cast<double>(steps);
          out.push_back(Constant{cur.controls + ramp(tau) * delta, h});
        }
      }
    }
  }
  return out;
}

inline Unitary2 propagate_ramped(const Protocol& p, const RampSpec& ramp, double dt) {
  return propagate_exact(ramped_protocol(p, ramp, dt));
}

inline Unitary2 propagate_ramped(const Protocol& p, const RampSpec& ramp) {
  if (ramp.epsilon == 0.0) return propagate_exact(p);
  return propagate_ramped(p, ramp, default_substep(p, ramp.epsilon));
}

/// Lower bound 1 - 2 (omega eps + c eps) on the fidelity of an uncompensated
/// protocol run with switching time eps.
inline double switching_fidelity_bound(const Protocol& p, double epsilon) {
  const auto [omega, c] = detail::coupling_scales(p);
  return 1.0 - 2.0 * (omega * epsilon + c * epsilon);
}

/// First-order timing correction for linear ramps: every constant segment is
/// shortened by epsilon/2 per adjacent switch, which for bang-off-bang gives
/// T_c - eps/2 and T_off - eps.
inline Protocol compensated_protocol(const Protocol& p, const RampSpec& ramp) {
  ramp.validate();
  if (ramp.shape != RampShape::Linear) throw InvalidArgument("compensated_protocol: only linear ramps are supported");
  if (ramp.epsilon == 0.0) return p;
  auto segs = detail::drop_empty_constants(p);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    auto* c = std::get_if<Constant>(&segs[i]);
    if (c == nullptr) continue;
    int switches = 0;
    if (i > 0 && std::holds_alternative<Constant>(segs[i - 1])) ++switches;
    if (i + 1 < segs.size() && std::holds_alternative<Constant>(segs[i + 1])) ++switches;
    c->duration -= 0.5 * ramp.epsilon * switches;
    if (c->duration < 0.0) throw EpsilonTooLarge("compensated_protocol: adjusted duration would be negative");
  }
  return Protocol(std::move(segs));
}

struct TrajectorySample {
  double t = 0.0;
  BlochState state;
};

/// Bloch-sphere samples of a protocol run. Kicks appear as two samples with
/// the same time stamp (before and after the jump).
struct Trajectory {
  std::vector<TrajectorySample> samples;
  double step = 0.0;
};

inline Trajectory sample_trajectory(const Protocol& p, const BlochState& psi_in, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("sample_trajectory: step must be positive");
  Trajectory traj;
  traj.step = step;
  Spinor psi = bloch_to_amplitudes(psi_in);
  double t = 0.0;
  traj.samples.push_back({0.0, psi_in});
  for (const auto& seg : p.segments()) {
    if (std::holds_alternative<Kick>(seg)) {
      psi = segment_propagator(seg).apply(psi);
      traj.samples.push_back({t, amplitudes_to_bloch(psi)});
      continue;
    }
    const auto& c = std::get<Constant>(seg);
    if (c.duration == 0.0) continue;
    const double end = t + c.duration;
    const Spinor start = psi;
    const double slack = 1e-12 * std::max(1.0, end);
    for (auto m = static_cast<long long>(std::floor(t / step)) + 1;; ++m) {
      const double tm = static_cast<double>(m) * step;
      if (tm >= end - slack) break;
      if (tm <= t + slack) continue;
      traj.samples.push_back({tm, amplitudes_to_bloch(pauli_exp(c.controls, tm - t).apply(start))});
    }
    psi = pauli_exp(c.controls, c.duration).apply(start);
    t = end;
    traj.samples.push_back({t, amplitudes_to_bloch(psi)});
  }
  return traj;
}

}  // namespace qopt

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

// Time-optimal transfer under |Gamma| <= c with omega fixed, for the family of
// state pairs on longitude phi = 0 placed symmetrically about the equator:
//
//   theta_in = pi/2 + alpha,  theta_f = pi/2 - alpha,  0 < alpha < pi/2.
//
// The optimal protocol is bang (+c, T_c), off (T_off), bang (-c, T_c). It is
// bang-off-bang for c > omega / tan(alpha) and bang-bang (T_off = 0) otherwise.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qopt/bloch.hpp"
#include "qopt/detail/angles.hpp"
#include "qopt/error.hpp"
#include "qopt/protocol.hpp"
#include "qopt/simulator.hpp"
#include "qopt/unconstrained.hpp"

namespace qopt {

/// Member of the symmetric state family, parametrized by alpha in (0, pi/2).
/// tan(alpha) is stored alongside alpha so that a pair built from tan(alpha)
/// reproduces it exactly; the regime boundary c = omega / tan(alpha) depends
/// on it.
class SymmetricPair {
 public:
  static SymmetricPair from_alpha(double alpha) { return SymmetricPair(alpha, std::tan(alpha)); }
  static SymmetricPair from_tan_alpha(double tan_alpha) {
    if (!std::isfinite(tan_alpha) || !(tan_alpha > 0.0)) throw InvalidArgument("SymmetricPair: tan(alpha) must be positive");
    return SymmetricPair(std::atan(tan_alpha), tan_alpha);
  }

  double alpha() const { return alpha_; }
  double tan_alpha() const { return tan_alpha_; }
  BlochState psi_in() const { return {detail::pi / 2.0 + alpha_, 0.0}; }
  BlochState psi_f() const { return {detail::pi / 2.0 - alpha_, 0.0}; }

 private:
  SymmetricPair(double alpha, double tan_alpha) : alpha_(alpha), tan_alpha_(tan_alpha) {
    if (!std::isfinite(alpha) || !(alpha > 0.0) || !(alpha < detail::pi / 2.0))
      throw InvalidArgument("SymmetricPair: alpha must lie in (0, pi/2)");
  }

  double alpha_;
  double tan_alpha_;
};

/// Recognizes (psi_in, psi_f) as a symmetric pair: both on phi = 0, theta_in
/// above pi/2 and theta_in + theta_f = pi, each within `tol`.
inline std::optional<SymmetricPair> as_symmetric_pair(const BlochState& psi_in, const BlochState& psi_f,
                                                      double tol = 1e-10) {
  auto on_zero_longitude = [tol](const BlochState& s) { return std::abs(detail::wrap_signed(s.phi())) <= tol; };
  if (!on_zero_longitude(psi_in) || !on_zero_longitude(psi_f)) return std::nullopt;
  if (std::abs(psi_in.theta() + psi_f.theta() - detail::pi) > tol) return std::nullopt;
  const double alpha = psi_in.theta() - detail::pi / 2.0;
  if (!(alpha > tol) || !(alpha < detail::pi / 2.0 - tol)) return std::nullopt;
  return SymmetricPair::from_alpha(alpha);
}

enum class Regime { BangBang, BangOffBang };

inline const char* to_string(Regime r) { return r == Regime::BangBang ? "BangBang" : "BangOffBang"; }

struct ConstrainedSolveDiagnostics {
  double rho = 0.0;
  Regime regime = Regime::BangBang;
  double t_c = 0.0;
  double t_off = 0.0;
  std::optional<double> t_c1;
  std::optional<double> t_c2;
  double n_value = 0.0;
  double d_value = 0.0;
};

struct ConstrainedSolution {
  Protocol protocol;
  ConstrainedSolveDiagnostics diagnostics;
};

namespace detail {

inline void require_bounds(double omega, double c) {
  require_positive(omega, "omega");
  require_positive(c, "c");
}

inline double bang_rate(double omega, double c) { return std::hypot(c, omega); }

}  // namespace detail

/// The boundary c = omega / tan(alpha) is assigned to BangBang.
inline Regime classify_regime(const SymmetricPair& pair, double omega, double c) {
  detail::require_bounds(omega, c);
  return c * pair.tan_alpha() <= omega ? Regime::BangBang : Regime::BangOffBang;
}

inline Regime classify_regime(double alpha, double omega, double c) {
  return classify_regime(SymmetricPair::from_alpha(alpha), omega, c);
}

struct StationaryCandidates {
  std::optional<double> t_c1;  ///< root of N (T_off = 0)
  std::optional<double> t_c2;  ///< interior stationary point of T(T_c)
};

/// Each candidate is present only when its sin^2 value does not exceed 1.
inline StationaryCandidates stationary_candidates(const SymmetricPair& pair, double omega, double c) {
  detail::require_bounds(omega, c);
  const double ta = pair.tan_alpha();
  const double rho = detail::bang_rate(omega, c);
  const double rho2 = c * c + omega * omega;
  auto candidate = [rho](double sin2) -> std::optional<double> {
    sin2 = detail::clamp_guarded(sin2, 0.0, 1.0);
    if (sin2 > 1.0) return std::nullopt;
    return std::asin(std::sqrt(sin2)) / rho;
  };
  return {candidate(rho2 * ta / (2.0 * omega * (c + omega * ta))), candidate(rho2 / (2.0 * c * (c + omega * ta)))};
}

struct OffTime {
  double t_off = 0.0;
  double n = 0.0;
  double d = 0.0;
};

/// tan(omega T_off) = N / D as a function of the bang duration T_c. Negative
/// T_off is returned as is; it marks infeasible T_c.
inline OffTime toff_of_tc(double t_c, const SymmetricPair& pair, double omega, double c) {
  detail::require_bounds(omega, c);
  const double rho = detail::bang_rate(omega, c);
  const double phase = rho * t_c;
  if (!(phase > 0.0) || phase > detail::pi / 2.0 * (1.0 + 1e-12))
    throw InvalidArgument("toff_of_tc: rho * t_c must lie in (0, pi/2]");
  const double ct = c / rho;
  const double wt = omega / rho;
  const double ta = pair.tan_alpha();
  const double k = ct + wt * ta;
  const double s = std::sin(phase);
  OffTime r;
  r.n = ta - 2.0 * wt * k * s * s;
  r.d = k * std::sin(2.0 * phase);
  if (r.d == 0.0) {
    r.t_off = (r.n > 0.0 ? detail::pi / 2.0 : (r.n < 0.0 ? -detail::pi / 2.0 : 0.0)) / omega;
  } else {
    r.t_off = std::atan(r.n / r.d) / omega;
  }
  return r;
}

struct CurvePoint {
  double t_c = 0.0;
  double total = 0.0;  ///< 2 T_c + T_off(T_c)
  double t_off = 0.0;
  bool feasible = false;  ///< T_off >= 0
};

inline std::vector<CurvePoint> total_time_curve(const SymmetricPair& pair, double omega, double c,
                                                std::span<const double> t_c_grid) {
  std::vector<CurvePoint> out;
  out.reserve(t_c_grid.size());
  for (double t_c : t_c_grid) {
    const OffTime off = toff_of_tc(t_c, pair, omega, c);
    out.push_back({t_c, 2.0 * t_c + off.t_off, off.t_off, off.t_off >= 0.0});
  }
  return out;
}

/// Uniform grid of n points on (0, pi / (2 rho)], the admissible T_c range.
inline std::vector<double> bang_duration_grid(double omega, double c, std::size_t n) {
  const double hi = detail::pi / (2.0 * detail::bang_rate(omega, c));
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = hi * static_cast<double>(i + 1) / static_cast<double>(n);
  return g;
}

struct BranchTimes {
  double t_c = 0.0;
  double t_off = 0.0;
  double t_min = 0.0;
};

/// Closed form of the bang-off-bang branch (valid for c >= omega / tan alpha).
inline BranchTimes bang_off_bang_times(const SymmetricPair& pair, double omega, double c) {
  detail::require_bounds(omega, c);
  const double ta = pair.tan_alpha();
  const double rho = detail::bang_rate(omega, c);
  BranchTimes b;
  b.t_c = detail::safe_asin(std::sqrt((c * c + omega * omega) / (2.0 * c * (c + omega * ta)))) / rho;
  b.t_off = std::atan((c * ta - omega) / std::sqrt(c * c + 2.0 * c * omega * ta - omega * omega)) / omega;
  b.t_min = 2.0 * b.t_c + b.t_off;
  return b;
}

/// Closed form of the bang-bang branch (valid for c <= omega / tan alpha).
inline BranchTimes bang_bang_times(const SymmetricPair& pair, double omega, double c) {
  detail::require_bounds(omega, c);
  const double ta = pair.tan_alpha();
  const double rho = detail::bang_rate(omega, c);
  BranchTimes b;
  b.t_c = detail::safe_asin(std::sqrt(ta * (c * c + omega * omega) / (2.0 * omega * (c + omega * ta)))) / rho;
  b.t_off = 0.0;
  b.t_min = 2.0 * b.t_c;
  return b;
}

inline Protocol bang_protocol(double omega, double c, double t_c, double t_off) {
  return Protocol({Constant{{c, omega, 0.0}, t_c}, Constant{{0.0, omega, 0.0}, t_off}, Constant{{-c, omega, 0.0}, t_c}});
}

inline ConstrainedSolution solve_symmetric_constrained(const SymmetricPair& pair, double omega, double c) {
  const Regime regime = classify_regime(pair, omega, c);
  const BranchTimes b =
      regime == Regime::BangBang ? bang_bang_times(pair, omega, c) : bang_off_bang_times(pair, omega, c);
  ConstrainedSolveDiagnostics d;
  d.rho = detail::bang_rate(omega, c);
  d.regime = regime;
  d.t_c = b.t_c;
  d.t_off = b.t_off;
  const auto cand = stationary_candidates(pair, omega, c);
  d.t_c1 = cand.t_c1;
  d.t_c2 = cand.t_c2;
  const OffTime off = toff_of_tc(b.t_c, pair, omega, c);
  d.n_value = off.n;
  d.d_value = off.d;
  return {bang_protocol(omega, c, b.t_c, b.t_off), d};
}

struct IntermediateStateReport {
  Regime regime = Regime::BangBang;
  BlochState mid_state;
  double longitude_error = 0.0;  ///< |phi - pi/2|
  double equator_error = 0.0;    ///< |theta - pi/2|
  bool on_longitude = false;
  bool on_equator = false;
};

/// Propagates psi_in through the first bang only. Bang-off-bang must arrive
/// on longitude pi/2, bang-bang on the equator.
inline IntermediateStateReport intermediate_state_check(const SymmetricPair& pair, double omega, double c) {
  constexpr double tol = 1e-9;
  const ConstrainedSolution sol = solve_symmetric_constrained(pair, omega, c);
  IntermediateStateReport r;
  r.regime = sol.diagnostics.regime;
  r.mid_state = evolve(pauli_exp({c, omega, 0.0}, sol.diagnostics.t_c), pair.psi_in());
  r.longitude_error = std::abs(detail::wrap_signed(r.mid_state.phi() - detail::pi / 2.0));
  r.equator_error = std::abs(r.mid_state.theta() - detail::pi / 2.0);
  r.on_longitude = r.longitude_error <= tol;
  r.on_equator = r.equator_error <= tol;
  const bool ok = r.regime == Regime::BangOffBang ? r.on_longitude : r.on_equator;
  if (!ok)
    throw ProtocolInconsistency(std::string("intermediate state off the expected ") +
                                (r.regime == Regime::BangOffBang ? "longitude" : "equator"));
  return r;
}

/// Density-matrix version: the dominant eigenvectors must form a symmetric
/// pair.
inline ConstrainedSolution solve_symmetric_constrained_density(const DensityMatrix& rho_in, const DensityMatrix& rho_f,
                                                               double omega, double c) {
  const auto spectra = detail::matched_spectra(rho_in, rho_f);
  if (!spectra) throw DegenerateSpectrum("maximally mixed density matrices");
  const auto pair = as_symmetric_pair(spectra->in.vector, spectra->f.vector);
  if (!pair) throw UnsupportedStates("dominant eigenvectors are not a symmetric pair");
  ConstrainedSolution sol = solve_symmetric_constrained(*pair, omega, c);
  detail::check_density_transport(sol.protocol, rho_in, rho_f);
  return sol;
}

struct SweepRow {
  double c_over_omega = 0.0;
  double omega_t_min = 0.0;
  double omega_t_off = 0.0;
  double two_omega_t_c = 0.0;
  Regime regime = Regime::BangBang;
  Protocol protocol;
};

/// Closed-form solutions over c/omega in [lo, hi], uniform or logarithmic.
inline std::vector<SweepRow> constrained_sweep(const SymmetricPair& pair, double omega, double lo, double hi,
                                               std::size_t points, bool log_grid) {
  detail::require_positive(omega, "constrained_sweep: omega");
  detail::require_positive(lo, "constrained_sweep: lower ratio");
  if (!std::isfinite(hi) || hi < lo || points == 0 || (points == 1 && hi != lo))
    throw InvalidArgument("constrained_sweep: invalid range");
  std::vector<SweepRow> rows;
  rows.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    double r = log_grid ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    if (i + 1 == points) r = hi;
    const ConstrainedSolution sol = solve_symmetric_constrained(pair, omega, r * omega);
    rows.push_back({r, omega * sol.protocol.total_time(), omega * sol.diagnostics.t_off,
                    2.0 * omega * sol.diagnostics.t_c, sol.diagnostics.regime, sol.protocol});
  }
  return rows;
}

}  // namespace qopt

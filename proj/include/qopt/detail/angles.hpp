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

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qopt::detail {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduces x into [0, period).
inline double wrap_positive(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

/// Reduces x modulo pi into (-pi/2, pi/2].
inline double wrap_half_open_pi(double x) {
  double r = x - pi * std::floor(x / pi);  // [0, pi)
  if (r > pi / 2.0) r -= pi;
  return r;
}

/// Wraps an angle difference into (-pi, pi].
inline double wrap_signed(double x) {
  double r = wrap_positive(x + pi, two_pi) - pi;
  if (r == -pi) r = pi;
  return r;
}

/// Clamps a value that should lie in [lo, hi] but may drift by rounding.
/// Anything outside the guard band is returned unchanged so that the caller's
/// domain error surfaces.
inline double clamp_guarded(double x, double lo, double hi, double guard = 1e-12) {
  if (x < lo && x >= lo - guard) return lo;
  if (x > hi && x <= hi + guard) return hi;
  return x;
}

inline double safe_asin(double x) { return std::asin(std::clamp(clamp_guarded(x, -1.0, 1.0), -1.0, 1.0)); }
inline double safe_acos(double x) { return std::acos(std::clamp(clamp_guarded(x, -1.0, 1.0), -1.0, 1.0)); }

}  // namespace qopt::detail

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

#include <cmath>
#include <variant>
#include <vector>

#include "qopt/error.hpp"
#include "qopt/su2.hpp"

namespace qopt {

/// Zero-duration impulse exp(-i angle (axis . sigma)), the limit of an
/// arbitrarily tall and narrow pulse. `axis` is a unit PauliVector; the usual
/// case is a sigma_3 kick.
struct Kick {
  PauliVector axis{1.0, 0.0, 0.0};
  double angle = 0.0;

  friend bool operator==(const Kick&, const Kick&) = default;
};

/// Constant controls held for `duration`.
struct Constant {
  PauliVector controls;
  double duration = 0.0;

  friend bool operator==(const Constant&, const Constant&) = default;
};

using PulseSegment = std::variant<Kick, Constant>;

inline Kick kick3(double angle) { return Kick{{1.0, 0.0, 0.0}, angle}; }

inline Unitary2 segment_propagator(const PulseSegment& seg) {
  if (const auto* k = std::get_if<Kick>(&seg)) return rotation_exp(k->axis, k->angle);
  const auto& c = std::get<Constant>(seg);
  return pauli_exp(c.controls, c.duration);
}

/// Ordered (earliest first) sequence of segments.
class Protocol {
 public:
  Protocol() = default;
  explicit Protocol(std::vector<PulseSegment> segments) : segments_(std::move(segments)) { validate(); }

  const std::vector<PulseSegment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }

  void push_back(PulseSegment seg) {
    check(seg);
    segments_.push_back(std::move(seg));
  }

  /// Sum of Constant durations; kicks take no time.
  double total_time() const {
    double t = 0.0;
    for (const auto& s : segments_)
      if (const auto* c = std::get_if<Constant>(&s)) t += c->duration;
    return t;
  }

  friend bool operator==(const Protocol&, const Protocol&) = default;

 private:
  static void check(const PulseSegment& seg) {
    if (const auto* k = std::get_if<Kick>(&seg)) {
      if (!std::isfinite(k->angle) || !k->axis.finite()) throw InvalidArgument("Kick: non-finite parameters");
      if (std::abs(k->axis.norm() - 1.0) > 1e-9) throw InvalidArgument("Kick: axis must be a unit vector");
    } else {
      const auto& c = std::get<Constant>(seg);
      if (!c.controls.finite() || !std::isfinite(c.duration)) throw InvalidArgument("Constant: non-finite parameters");
      if (c.duration < 0.0) throw InvalidArgument("Constant: negative duration");
    }
  }

  void validate() const {
    for (const auto& s : segments_) check(s);
  }

  std::vector<PulseSegment> segments_;
};

}  // namespace qopt

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

// Walks through the library on the tan(alpha) = 2 pair: closed forms in both
// regimes, a finite-ramp simulation, and an oracle cross-check.

#include <cstdio>

#include "qopt/qopt.hpp"

namespace {

void print_protocol(const qopt::Protocol& p) {
  for (const auto& seg : p.segments()) {
    if (const auto* k = std::get_if<qopt::Kick>(&seg)) {
      std::printf("    kick   axis (%g, %g, %g) angle %.6f\n", k->axis.g3, k->axis.g1, k->axis.g2, k->angle);
    } else {
      const auto& c = std::get<qopt::Constant>(seg);
      std::printf("    hold   (Gamma, w1, w2) = (%+.3f, %.3f, %.3f) for %.6f\n", c.controls.g3, c.controls.g1,
                  c.controls.g2, c.duration);
    }
  }
}

}  // namespace

int main() {
  using namespace qopt;
  const SymmetricPair pair = SymmetricPair::from_tan_alpha(2.0);
  const double omega = 1.0;

  std::printf("unconstrained Gamma:\n");
  const Protocol free_gamma = solve_unconstrained(pair.psi_in(), pair.psi_f(), omega);
  print_protocol(free_gamma);
  std::printf("  T = %.6f\n\n", free_gamma.total_time());

  for (double c : {1.0, 0.25}) {
    const ConstrainedSolution s = solve_symmetric_constrained(pair, omega, c);
    std::printf("|Gamma| <= %g (%s):\n", c, to_string(s.diagnostics.regime));
    print_protocol(s.protocol);
    const double f = transfer_fidelity(propagate_exact(s.protocol), pair.psi_in(), pair.psi_f());
    std::printf("  T = %.6f, fidelity %.15f\n", s.protocol.total_time(), f);

    const double eps = 0.005;
    const double ramped = transfer_fidelity(propagate_ramped(s.protocol, RampSpec::linear(eps)), pair.psi_in(),
                                            pair.psi_f());
    std::printf("  linear ramps, eps = %g: fidelity %.9f (bound %.4f)\n", eps, ramped,
                switching_fidelity_bound(s.protocol, eps));

    ControlBounds bounds;
    bounds.gamma_max = c;
    bounds.omega1_max = omega;
    const OracleResult r = brute_force_min_time(pair.psi_in(), pair.psi_f(), bounds, SearchConfig{});
    std::printf("  oracle: T = %.6f with %d segments\n\n", r.best_time, r.segments_used);
  }
  return 0;
}

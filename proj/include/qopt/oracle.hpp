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

// Brute-force minimal-time search over structured schedules.
//
// A schedule is a sequence of letters from a finite alphabet: constant
// Hamiltonians with bang values (continuous duration) and, for each
// unconstrained channel, kicks about its axis (continuous angle). For every
// sequence with adjacent letters distinct, grid or random seeds are projected
// onto the exact transfer manifold and the total duration is then descended
// along that manifold. Every reported schedule is therefore an exact transfer
// up to roundoff, so its time is an upper bound on the true minimum.
//
// The forward model is an SO(3) rotation product of Bloch vectors, independent
// of the SU(2) kernel; the final fidelity is recomputed with propagate_exact.

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qopt/bloch.hpp"
#include "qopt/detail/angles.hpp"
#include "qopt/error.hpp"
#include "qopt/multicontrol.hpp"
#include "qopt/protocol.hpp"
#include "qopt/simulator.hpp"

namespace qopt {

enum class Drive { Fixed, Bounded, Free };

struct Channel {
  Drive drive = Drive::Fixed;
  double value = 0.0;  ///< fixed value, or bound for Bounded

  static Channel fixed(double v) { return {Drive::Fixed, v}; }
  static Channel bounded(double max) { return {Drive::Bounded, max}; }
  static Channel free() { return {Drive::Free, 0.0}; }
};

/// Per-channel description of H = Gamma s3 + w1 s1 + w2 s2.
struct ControlProblem {
  Channel gamma = Channel::free();
  Channel omega1 = Channel::fixed(0.0);
  Channel omega2 = Channel::fixed(0.0);

  /// Absent gamma is free; absent omega_i is not driven.
  static ControlProblem from_bounds(const ControlBounds& b) {
    b.validate();
    ControlProblem p;
    p.gamma = b.gamma_max ? Channel::bounded(*b.gamma_max) : Channel::free();
    p.omega1 = b.omega1_max ? Channel::bounded(*b.omega1_max) : Channel::fixed(0.0);
    p.omega2 = b.omega2_max ? Channel::bounded(*b.omega2_max) : Channel::fixed(0.0);
    return p;
  }

  void validate() const {
    for (const Channel* c : {&gamma, &omega1, &omega2}) {
      if (!std::isfinite(c->value)) throw InvalidArgument("ControlProblem: non-finite channel value");
      if (c->drive == Drive::Bounded && c->value < 0.0) throw InvalidArgument("ControlProblem: negative bound");
    }
  }
};

struct SearchConfig {
  int max_segments = 3;
  int min_segments = 1;
  int duration_grid = 64;          ///< seed points per parameter in grid mode
  int refine_iterations = 150;     ///< descent steps per start
  double time_upper_bound = 100.0;
  double fidelity_target = 1.0 - 1e-6;
  std::uint64_t seed = 0;
  bool free_controls = false;      ///< Gamma on a 21-level grid instead of {0, +-c}
  int seeds_per_sequence = 4096;   ///< random seeds when the grid is too large
  std::size_t max_grid_points = std::size_t{1} << 18;
  int projection_starts = 24;      ///< seeds projected onto the manifold per sequence
  int descent_starts = 4;          ///< projected seeds descended per sequence
  int threads = 0;                 ///< 0: hardware concurrency; always capped by QOPT_THREADS

  static constexpr int segment_cap = 16;

  void validate() const {
    if (max_segments < 1 || max_segments > segment_cap) throw InvalidArgument("SearchConfig: max_segments out of range");
    if (min_segments < 1 || min_segments > max_segments) throw InvalidArgument("SearchConfig: min_segments out of range");
    if (duration_grid < 2 || refine_iterations < 1 || seeds_per_sequence < 1 || max_grid_points < 1 ||
        projection_starts < 1 || descent_starts < 1 || threads < 0)
      throw InvalidArgument("SearchConfig: counts must be positive");
    if (!(time_upper_bound > 0.0) || !std::isfinite(time_upper_bound))
      throw InvalidArgument("SearchConfig: time_upper_bound must be positive");
    if (!(fidelity_target > 0.0) || !(fidelity_target < 1.0))
      throw InvalidArgument("SearchConfig: fidelity_target must lie in (0, 1)");
  }
};

struct OracleResult {
  double best_time = std::numeric_limits<double>::infinity();
  Protocol schedule;
  double achieved_fidelity = 0.0;
  int segments_used = 0;
  double tolerance = 0.0;  ///< size of the last accepted descent step in total time
  bool converged = false;
  int max_segments = 0;    ///< segment cap the search ran with
  std::size_t sequences_searched = 0;
};

namespace detail::oracle {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Jac = Eigen::Matrix<double, 3, Eigen::Dynamic, 0, 3, SearchConfig::segment_cap>;
using VecP = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, SearchConfig::segment_cap, 1>;
using MatP = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, SearchConfig::segment_cap,
                           SearchConfig::segment_cap>;

inline Vec3 to_xyz(const PauliVector& p) { return {p.g1, p.g2, p.g3}; }
inline Vec3 to_xyz(const std::array<double, 3>& r) { return {r[0], r[1], r[2]}; }

struct Letter {
  bool kick = false;
  PauliVector controls;  ///< kick: unit axis; constant: Hamiltonian
  Vec3 axis;             ///< unit rotation axis on the Bloch sphere
  double rate = 0.0;     ///< Bloch rotation angle per unit parameter

  double range_lo() const { return kick ? -detail::pi / 2.0 : 0.0; }
  double range_width() const { return kick ? detail::pi : detail::two_pi / rate; }
};

inline Letter make_kick(const PauliVector& axis) { return {true, axis, to_xyz(axis), 2.0}; }
inline Letter make_constant(const PauliVector& h) { return {false, h, to_xyz(h) / h.norm(), 2.0 * h.norm()}; }

inline std::vector<Letter> build_alphabet(const ControlProblem& prob, bool free_controls) {
  prob.validate();
  const Channel* ch[3] = {&prob.gamma, &prob.omega1, &prob.omega2};
  std::vector<Letter> out;
  bool any_free = false;
  for (int i = 0; i < 3; ++i) {
    if (ch[i]->drive != Drive::Free) continue;
    any_free = true;
    PauliVector axis{i == 0 ? 1.0 : 0.0, i == 1 ? 1.0 : 0.0, i == 2 ? 1.0 : 0.0};
    out.push_back(make_kick(axis));
  }
  const bool all_bounded = !any_free && ch[0]->drive == Drive::Bounded && ch[1]->drive == Drive::Bounded &&
                           ch[2]->drive == Drive::Bounded;
  std::vector<PauliVector> values;
  if (all_bounded && !free_controls && ch[0]->value > 0.0 && ch[1]->value > 0.0 && ch[2]->value > 0.0) {
    for (const auto& c : enumerate_candidates({ch[0]->value, ch[1]->value, ch[2]->value})) values.push_back(c.controls);
  } else {
    std::vector<double> levels[3];
    for (int i = 0; i < 3; ++i) {
      const Channel& c = *ch[i];
      if (c.drive == Drive::Fixed) {
        levels[i] = {c.value};
      } else if (c.drive == Drive::Free) {
        levels[i] = {0.0};
      } else if (i == 0 || all_bounded) {
        if (i == 0 && free_controls) {
          for (int l = 0; l <= 20; ++l) levels[i].push_back(c.value * (1.0 - l / 10.0));
        } else {
          levels[i] = {c.value, -c.value, 0.0};
        }
      } else {
        levels[i] = {c.value};  // sign of a bounded transverse drive never switches
      }
    }
    for (double g : levels[0])
      for (double a : levels[1])
        for (double b : levels[2]) values.push_back({g, a, b});
  }
  for (const auto& v : values) {
    if (!(v.norm() > 0.0)) continue;
    bool dup = false;
    for (const auto& l : out) dup = dup || (!l.kick && l.controls == v);
    if (!dup) out.push_back(make_constant(v));
  }
  return out;
}

/// Sequences of letter indices of length k with adjacent entries distinct,
/// in lexicographic order.
inline void enumerate_sequences(int n_letters, int k, std::vector<std::vector<int>>& out) {
  if (n_letters <= 0) return;
  std::vector<int> cur(k, 0);
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == k) {
      out.push_back(cur);
      return;
    }
    for (int l = 0; l < n_letters; ++l) {
      if (pos > 0 && cur[pos - 1] == l) continue;
      cur[pos] = l;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
}

inline Mat3 rot(const Letter& l, double x) { return Eigen::AngleAxisd(l.rate * x, l.axis).toRotationMatrix(); }

struct Model {
  std::vector<const Letter*> seq;
  Vec3 m0;
  Vec3 target;

  int size() const { return static_cast<int>(seq.size()); }

  Vec3 forward(const VecP& x) const {
    Vec3 m = m0;
    for (int j = 0; j < size(); ++j) m = rot(*seq[j], x[j]) * m;
    return m;
  }

  double time(const VecP& x) const {
    double t = 0.0;
    for (int j = 0; j < size(); ++j)
      if (!seq[j]->kick) t += x[j];
    return t;
  }

  /// Residual m(x) - target and its Jacobian; column j is
  /// rate_j (R_{>j} axis_j) x m_final.
  Vec3 residual(const VecP& x, Jac* jac) const {
    const int n = size();
    std::array<Mat3, SearchConfig::segment_cap> r;
    Vec3 m = m0;
    for (int j = 0; j < n; ++j) {
      r[j] = rot(*seq[j], x[j]);
      m = r[j] * m;
    }
    if (jac) {
      jac->resize(3, n);
      Mat3 suffix = Mat3::Identity();
      for (int j = n - 1; j >= 0; --j) {
        jac->col(j) = seq[j]->rate * (suffix * seq[j]->axis).cross(m);
        suffix = suffix * r[j];
      }
    }
    return m - target;
  }

  void clamp(VecP& x) const {
    for (int j = 0; j < size(); ++j)
      if (!seq[j]->kick && x[j] < 0.0) x[j] = 0.0;
  }
};

constexpr double feasible_residual = 1e-13;

/// Levenberg-Marquardt on |m(x) - target|^2 over the free coordinates.
inline bool project(const Model& mdl, VecP& x, const std::vector<char>& frozen, int max_iter = 200) {
  const int n = mdl.size();
  Jac jac;
  Vec3 r = mdl.residual(x, &jac);
  double cost = r.squaredNorm();
  double lambda = 1e-6;
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(cost) <= feasible_residual) return true;
    for (int j = 0; j < n; ++j)
      if (frozen[j]) jac.col(j).setZero();
    const MatP jtj = jac.transpose() * jac;
    const VecP g = jac.transpose() * r;
    bool improved = false;
    while (lambda < 1e12) {
      MatP a = jtj;
      a.diagonal().array() += lambda;
      VecP cand = x - a.ldlt().solve(g);
      mdl.clamp(cand);
      Jac cand_jac;
      const Vec3 cr = mdl.residual(cand, &cand_jac);
      const double cc = cr.squaredNorm();
      if (cc < cost) {
        x = cand;
        r = cr;
        jac = cand_jac;
        cost = cc;
        lambda = std::max(lambda / 5.0, 1e-15);
        improved = true;
        break;
      }
      lambda *= 8.0;
    }
    if (!improved) break;
  }
  return std::sqrt(cost) <= feasible_residual;
}

struct Refined {
  VecP x;
  double time = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
};

/// Projected-gradient descent of total time along the exact manifold with an
/// active set for durations pinned at zero.
inline Refined descend(const Model& mdl, VecP x, int iterations) {
  const int n = mdl.size();
  const double scale = 0.1 * (mdl.time(x) + 0.1);
  double step = scale;
  double last_gain = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Jac jac;
    mdl.residual(x, &jac);
    std::vector<char> active(n, 0);
    VecP dir(n);
    for (;;) {
      Jac jf = jac;
      VecP c = VecP::Zero(n);
      for (int j = 0; j < n; ++j) {
        if (active[j]) {
          jf.col(j).setZero();
        } else if (!mdl.seq[j]->kick) {
          c[j] = 1.0;
        }
      }
      Eigen::JacobiSVD<Jac> svd(jf, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const double tol = 1e-10 * std::max(1.0, sv.size() ? sv[0] : 0.0);
      VecP pc = c;
      for (int s = 0; s < sv.size(); ++s)
        if (sv[s] > tol) {
          const VecP v = svd.matrixV().col(s);
          pc -= v * v.dot(c);
        }
      dir = -pc;
      for (int j = 0; j < n; ++j)
        if (active[j]) dir[j] = 0.0;
      bool changed = false;
      for (int j = 0; j < n; ++j)
        if (!active[j] && !mdl.seq[j]->kick && x[j] <= 0.0 && dir[j] < 0.0) {
          active[j] = 1;
          changed = true;
        }
      if (!changed) break;
    }
    const double dn = dir.norm();
    if (dn < 1e-12) {
      last_gain = 0.0;
      break;
    }
    dir /= dn;
    const double t0 = mdl.time(x);
    bool accepted = false;
    while (step > 1e-13 * (1.0 + t0)) {
      VecP cand = x + step * dir;
      mdl.clamp(cand);
      if (project(mdl, cand, active) && mdl.time(cand) < t0) {
        last_gain = t0 - mdl.time(cand);
        x = cand;
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return {x, mdl.time(x), last_gain};
}


inline std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct SequenceResult {
  bool found = false;
  VecP x;
  double time = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  VecP closest;  ///< smallest residual reached when nothing is feasible
  double closest_infidelity = 1.0;
};

struct Seed {
  double time;
  double infidelity;
  VecP x;
};

/// Keeps the `cap` smallest entries under `less`.
template <class Less>
void keep_best(std::vector<Seed>& pool, Seed s, std::size_t cap, Less less) {
  if (pool.size() < cap) {
    pool.push_back(std::move(s));
    std::push_heap(pool.begin(), pool.end(), less);
  } else if (less(s, pool.front())) {
    std::pop_heap(pool.begin(), pool.end(), less);
    pool.back() = std::move(s);
    std::push_heap(pool.begin(), pool.end(), less);
  }
}

/// Seeds are stratified by total time: each of `projection_starts` time
/// buckets keeps its best-fidelity grid point, so every time scale gets a
/// start even when low-fidelity short schedules are plentiful.
inline SequenceResult search_sequence(const Model& mdl, const SearchConfig& cfg, std::uint64_t rng_seed) {
  const int n = mdl.size();
  constexpr double seed_infidelity = 0.05;
  const std::size_t buckets = static_cast<std::size_t>(cfg.projection_starts);
  const std::size_t by_fid_cap = std::max<std::size_t>(1, buckets / 3);
  auto by_time = [](const Seed& a, const Seed& b) { return a.time < b.time; };
  auto by_fid = [](const Seed& a, const Seed& b) { return a.infidelity < b.infidelity; };
  double t_span = 0.0;
  for (const Letter* l : mdl.seq)
    if (!l->kick) t_span += l->range_width();
  t_span = std::min(t_span, cfg.time_upper_bound);
  std::vector<std::optional<Seed>> strata(buckets);
  std::vector<Seed> best;

  auto offer = [&](const Vec3& m, const VecP& x) {
    const double infid = 0.5 * (1.0 - m.dot(mdl.target));
    const double t = mdl.time(x);
    if (t > cfg.time_upper_bound) return;
    if (infid <= seed_infidelity) {
      const std::size_t b =
          t_span > 0.0 ? std::min(buckets - 1, static_cast<std::size_t>(t / t_span * static_cast<double>(buckets))) : 0;
      if (!strata[b] || infid < strata[b]->infidelity) strata[b] = Seed{t, infid, x};
    }
    keep_best(best, {t, infid, x}, by_fid_cap, by_fid);
  };

  const std::size_t g = static_cast<std::size_t>(cfg.duration_grid);
  double points = 1.0;
  for (int j = 0; j < n; ++j) points *= static_cast<double>(g);
  if (points <= static_cast<double>(cfg.max_grid_points)) {
    std::vector<std::vector<Mat3>> table(n, std::vector<Mat3>(g));
    std::vector<std::vector<double>> values(n, std::vector<double>(g));
    for (int j = 0; j < n; ++j)
      for (std::size_t i = 0; i < g; ++i) {
        const Letter& l = *mdl.seq[j];
        values[j][i] = l.range_lo() + l.range_width() * static_cast<double>(i) / static_cast<double>(g);
        table[j][i] = rot(l, values[j][i]);
      }
    VecP x(n);
    auto rec = [&](auto&& self, int j, const Vec3& m) -> void {
      if (j == n) {
        offer(m, x);
        return;
      }
      for (std::size_t i = 0; i < g; ++i) {
        x[j] = values[j][i];
        self(self, j + 1, table[j][i] * m);
      }
    };
    rec(rec, 0, mdl.m0);
  } else {
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    VecP x(n);
    for (int s = 0; s < cfg.seeds_per_sequence; ++s) {
      for (int j = 0; j < n; ++j) x[j] = mdl.seq[j]->range_lo() + mdl.seq[j]->range_width() * u(rng);
      offer(mdl.forward(x), x);
    }
  }

  std::sort(best.begin(), best.end(), by_fid);
  std::vector<Seed> starts;
  for (auto& st : strata)
    if (st) starts.push_back(*st);
  starts.insert(starts.end(), best.begin(), best.end());

  SequenceResult res;
  std::vector<Seed> feasible;
  const std::vector<char> none(n, 0);
  for (auto& s : starts) {
    VecP x = s.x;
    if (!project(mdl, x, none)) {
      const double infid = 0.5 * (1.0 - mdl.forward(x).dot(mdl.target));
      if (infid < res.closest_infidelity) {
        res.closest_infidelity = infid;
        res.closest = x;
      }
      continue;
    }
    const double t = mdl.time(x);
    if (t > cfg.time_upper_bound) continue;
    feasible.push_back({t, 0.0, x});
  }
  std::stable_sort(feasible.begin(), feasible.end(), by_time);

  const std::size_t n_desc = std::min<std::size_t>(feasible.size(), static_cast<std::size_t>(cfg.descent_starts));
  for (std::size_t i = 0; i < n_desc; ++i) {
    const Refined r = descend(mdl, feasible[i].x, cfg.refine_iterations);
    if (r.time < res.time) {
      res.found = true;
      res.x = r.x;
      res.time = r.time;
      res.tolerance = r.tolerance;
    }
  }
  return res;
}

inline unsigned thread_count(const SearchConfig& cfg) {
  unsigned n = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QOPT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

inline Protocol to_protocol(const Model& mdl, const VecP& x) {
  std::vector<PulseSegment> segs;
  for (int j = 0; j < mdl.size(); ++j) {
    const Letter& l = *mdl.seq[j];
    if (l.kick) {
      segs.push_back(Kick{l.controls, x[j]});
    } else if (x[j] > 0.0) {
      segs.push_back(Constant{l.controls, x[j]});
    }
  }
  return Protocol(std::move(segs));
}

}  // namespace detail::oracle

/// Minimal-time upper bound over schedules of min_segments..max_segments
/// letters. Equal times resolve to the lexicographically first sequence.
inline OracleResult brute_force_min_time(const BlochState& psi_in, const BlochState& psi_f, const ControlProblem& problem,
                                         const SearchConfig& cfg) {
  namespace o = detail::oracle;
  cfg.validate();
  OracleResult out;
  out.max_segments = cfg.max_segments;
  if (state_fidelity(psi_in, psi_f) >= 1.0 - 1e-15) {
    out.best_time = 0.0;
    out.achieved_fidelity = 1.0;
    out.converged = true;
    return out;
  }
  const std::vector<o::Letter> alphabet = o::build_alphabet(problem, cfg.free_controls);
  if (alphabet.empty()) throw InvalidArgument("brute_force_min_time: no admissible controls");

  std::vector<std::vector<int>> sequences;
  for (int k = cfg.min_segments; k <= cfg.max_segments; ++k)
    o::enumerate_sequences(static_cast<int>(alphabet.size()), k, sequences);
  out.sequences_searched = sequences.size();

  const o::Vec3 m0 = o::to_xyz(psi_in.vector());
  const o::Vec3 target = o::to_xyz(psi_f.vector());
  auto model_of = [&](const std::vector<int>& seq) {
    o::Model m{{}, m0, target};
    for (int l : seq) m.seq.push_back(&alphabet[l]);
    return m;
  };

  std::vector<o::SequenceResult> results(sequences.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < sequences.size(); i = next++)
      results[i] = o::search_sequence(model_of(sequences[i]), cfg, o::splitmix(cfg.seed ^ o::splitmix(i)));
  };
  const unsigned nt = std::min<unsigned>(o::thread_count(cfg), static_cast<unsigned>(sequences.size()));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < results.size(); ++i)
    if (results[i].found && (!best || results[i].time < results[*best].time)) best = i;
  if (!best) {
    // Nothing exact: report the closest approach for diagnostics.
    std::optional<std::size_t> closest;
    for (std::size_t i = 0; i < results.size(); ++i)
      if (results[i].closest.size() > 0 &&
          (!closest || results[i].closest_infidelity < results[*closest].closest_infidelity))
        closest = i;
    if (closest) {
      out.schedule = o::to_protocol(model_of(sequences[*closest]), results[*closest].closest);
      out.segments_used = static_cast<int>(out.schedule.size());
      out.achieved_fidelity = transfer_fidelity(propagate_exact(out.schedule), psi_in, psi_f);
    }
    return out;
  }

  const o::Model mdl = model_of(sequences[*best]);
  out.schedule = o::to_protocol(mdl, results[*best].x);
  out.best_time = out.schedule.total_time();
  out.tolerance = results[*best].tolerance;
  out.segments_used = static_cast<int>(out.schedule.size());
  out.achieved_fidelity = transfer_fidelity(propagate_exact(out.schedule), psi_in, psi_f);
  out.converged = out.achieved_fidelity >= cfg.fidelity_target && out.best_time <= cfg.time_upper_bound;
  return out;
}

inline OracleResult brute_force_min_time(const BlochState& psi_in, const BlochState& psi_f, const ControlBounds& bounds,
                                         const SearchConfig& cfg) {
  if (bounds.trivial()) {
    OracleResult r;
    r.best_time = 0.0;
    r.achieved_fidelity = 1.0;
    r.converged = true;
    r.max_segments = cfg.max_segments;
    return r;
  }
  return brute_force_min_time(psi_in, psi_f, ControlProblem::from_bounds(bounds), cfg);
}

struct WitnessReport {
  double theta_c = 0.0;
  BlochState psi_in;
  BlochState psi_f;
  OracleResult three_segment;      ///< best schedule with at most three segments
  OracleResult multistep;          ///< first converging count above three, else the closest approach
  int multistep_segments = 0;      ///< 0 when no count up to the cap converged
  int max_segments_searched = 0;
  bool three_segment_fails = false;
  bool multistep_converges = false;
};

/// Constrained problem |Gamma| <= c, omega fixed, between theta_in and
/// theta_f on longitude phi = 0. Searches exact segment counts 4, 5, ...,
/// cfg.max_segments until one converges.
inline WitnessReport multistep_witness(double theta_in, double theta_f, double c, double omega, SearchConfig cfg) {
  detail::require_positive(c, "multistep_witness: c");
  detail::require_positive(omega, "multistep_witness: omega");
  WitnessReport rep;
  rep.theta_c = std::atan2(omega, c);
  rep.psi_in = BlochState(theta_in, 0.0);
  rep.psi_f = BlochState(theta_f, 0.0);
  ControlProblem prob;
  prob.gamma = Channel::bounded(c);
  prob.omega1 = Channel::fixed(omega);
  prob.omega2 = Channel::fixed(0.0);
  const int cap = cfg.max_segments;
  rep.max_segments_searched = cap;

  SearchConfig three = cfg;
  three.min_segments = 1;
  three.max_segments = std::min(3, cap);
  rep.three_segment = brute_force_min_time(rep.psi_in, rep.psi_f, prob, three);
  rep.three_segment_fails = !rep.three_segment.converged;
  if (!rep.three_segment_fails && rep.three_segment.best_time == 0.0) {
    rep.multistep = rep.three_segment;
    rep.multistep_converges = true;
    return rep;
  }
  for (int k = 4; k <= cap; ++k) {
    SearchConfig exact = cfg;
    exact.min_segments = k;
    exact.max_segments = k;
    OracleResult r = brute_force_min_time(rep.psi_in, rep.psi_f, prob, exact);
    if (r.converged) {
      rep.multistep = std::move(r);
      rep.multistep.max_segments = cap;
      rep.multistep_segments = k;
      rep.multistep_converges = true;
      break;
    }
    if (r.achieved_fidelity > rep.multistep.achieved_fidelity) rep.multistep = std::move(r);
  }
  return rep;
}

}  // namespace qopt

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

// qopt: command-line front end for the minimal-time solvers, the ramped
// simulator, the parameter sweep and the brute-force oracle.
//
// Exit codes: 0 ok, 1 internal error, 2 invalid arguments, 3 unsupported
// states, 4 not unitarily reachable, 5 epsilon too large, 6 verification
// failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qopt/qopt.hpp"

namespace {

using qopt::Complex;
using nlohmann::json;

enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kInvalid = 2,
  kUnsupported = 3,
  kUnreachable = 4,
  kEpsilon = 5,
  kVerifyFailed = 6,
};

int exit_code_for(const qopt::Error& e) {
  switch (e.kind()) {
    case qopt::ErrorKind::InvalidArgument:
    case qopt::ErrorKind::DegenerateSpectrum:
    case qopt::ErrorKind::ZeroTimeTrivial: return kInvalid;
    case qopt::ErrorKind::UnsupportedStates: return kUnsupported;
    case qopt::ErrorKind::NotUnitarilyReachable: return kUnreachable;
    case qopt::ErrorKind::EpsilonTooLarge: return kEpsilon;
    default: return kInternal;
  }
}

bool use_color() { return std::getenv("NO_COLOR") == nullptr && isatty(STDOUT_FILENO); }

std::string paint(const std::string& s, bool ok) {
  if (!use_color()) return s;
  return (ok ? "\x1b[32m" : "\x1b[31m") + s + "\x1b[0m";
}

double parse_real(const std::string& s, const std::string& what) {
  if (s.empty()) throw qopt::InvalidArgument(what + ": empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) throw qopt::InvalidArgument(what + ": bad number '" + s + "'");
  return v;
}

/// "re", "imI", "re+imI" or "re-imI"; a bare "I" means 1.
Complex parse_complex(std::string s, const std::string& what) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw qopt::InvalidArgument(what + ": empty complex number");
  if (s.back() != 'I') return {parse_real(s, what), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t, what);
  };
  if (split == std::string::npos) return {0.0, imag(s)};
  return {parse_real(s.substr(0, split), what), imag(s.substr(split))};
}

std::vector<Complex> parse_complex_list(const std::string& s, std::size_t n, const std::string& what) {
  std::vector<Complex> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item, what));
  if (out.size() != n)
    throw qopt::InvalidArgument(what + ": expected " + std::to_string(n) + " comma-separated complex entries");
  return out;
}

qopt::Spinor parse_spinor(const std::string& s, const std::string& what) {
  const auto v = parse_complex_list(s, 2, what);
  return {v[0], v[1]};
}

qopt::DensityMatrix parse_density(const std::string& s, const std::string& what) {
  const auto v = parse_complex_list(s, 4, what);
  return qopt::DensityMatrix::from_entries(v[0], v[1], v[2], v[3]);
}

std::string timestamp_now() {
  std::time_t t = std::time(nullptr);
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json segments_json(const qopt::Protocol& p) {
  json arr = json::array();
  for (const auto& seg : p.segments()) {
    if (const auto* k = std::get_if<qopt::Kick>(&seg)) {
      arr.push_back({{"kind", "kick"}, {"controls", {k->axis.g3, k->axis.g1, k->axis.g2}}, {"duration", 0.0},
                     {"kick_angle", k->angle}});
    } else {
      const auto& c = std::get<qopt::Constant>(seg);
      arr.push_back({{"kind", "constant"}, {"controls", {c.controls.g3, c.controls.g1, c.controls.g2}},
                     {"duration", c.duration}, {"kick_angle", 0.0}});
    }
  }
  return arr;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json oracle_json(const qopt::OracleResult& r) {
  return {{"best_time", number_or_null(r.best_time)},
          {"achieved_fidelity", r.achieved_fidelity},
          {"segments_used", r.segments_used},
          {"tolerance", r.tolerance},
          {"converged", r.converged},
          {"max_segments", r.max_segments},
          {"sequences_searched", r.sequences_searched},
          {"schedule", segments_json(r.schedule)}};
}

/// Flags shared by solve and verify.
struct ProblemArgs {
  std::string psi_in;
  std::string psi_f;
  std::optional<double> omega;
  std::optional<double> gamma_max;
  std::optional<double> omega1_max;
  std::optional<double> omega2_max;
  bool density = false;

  void attach(CLI::App* app) {
    app->add_option("--psi-in", psi_in, "initial state a0,a1 (complex as re+imI); with --density r00,r01,r10,r11")
        ->required();
    app->add_option("--psi-f", psi_f, "target state, same syntax as --psi-in")->required();
    app->add_option("--omega", omega, "fixed sigma_1 coupling");
    app->add_option("--gamma-max", gamma_max, "bound on |Gamma|; absent means unconstrained");
    app->add_option("--omega1-max", omega1_max, "bound on the sigma_1 drive");
    app->add_option("--omega2-max", omega2_max, "bound on the sigma_2 drive");
    app->add_flag("--density", density, "read --psi-in/--psi-f as density matrices");
  }

  /// Bounds with omega1 taken from --omega when no explicit bound is given.
  qopt::ControlBounds bounds() const {
    qopt::ControlBounds b;
    b.gamma_max = gamma_max;
    b.omega1_max = omega1_max ? omega1_max : omega;
    b.omega2_max = omega2_max;
    b.validate();
    if (!b.omega1_max && !b.omega2_max) throw qopt::InvalidArgument("--omega (or --omega1-max) is required");
    return b;
  }

  qopt::ProblemSpec spec() const {
    qopt::ProblemSpec p;
    if (density) {
      p.rho_in = parse_density(psi_in, "--psi-in");
      p.rho_f = parse_density(psi_f, "--psi-f");
    } else {
      p.psi_in = parse_spinor(psi_in, "--psi-in");
      p.psi_f = parse_spinor(psi_f, "--psi-f");
      qopt::amplitudes_to_bloch(*p.psi_in);
      qopt::amplitudes_to_bloch(*p.psi_f);
    }
    p.bounds = bounds();
    p.omega = p.bounds.omega1_max;
    return p;
  }
};

/// Pure-state endpoints of a problem; density problems use the dominant
/// eigenvectors.
std::pair<qopt::BlochState, qopt::BlochState> endpoints(const qopt::ProblemSpec& p) {
  if (p.psi_in && p.psi_f) return {qopt::amplitudes_to_bloch(*p.psi_in), qopt::amplitudes_to_bloch(*p.psi_f)};
  if (p.rho_in && p.rho_f) {
    const auto s = qopt::detail::matched_spectra(*p.rho_in, *p.rho_f);
    if (!s) throw qopt::DegenerateSpectrum("maximally mixed density matrices have no pure endpoints");
    return {s->in.vector, s->f.vector};
  }
  throw qopt::InvalidArgument("problem has no states");
}

struct AnalyticSolution {
  qopt::Protocol protocol;
  std::optional<qopt::ConstrainedSolveDiagnostics> diagnostics;
  std::string solver;
};

/// Closed-form solver for the bounds pattern; nullopt when none applies
/// (raised as UnsupportedStates by callers that need one).
std::optional<AnalyticSolution> analytic_solve(const qopt::ProblemSpec& p) {
  const qopt::ControlBounds& b = p.bounds;
  const bool dens = p.rho_in.has_value();
  if (!b.gamma_max) {
    if (b.omega2_max) {
      qopt::Protocol pr = dens ? qopt::solve_one_unconstrained_density(*p.rho_in, *p.rho_f, b)
                               : qopt::solve_one_unconstrained(qopt::amplitudes_to_bloch(*p.psi_in),
                                                               qopt::amplitudes_to_bloch(*p.psi_f), b);
      return AnalyticSolution{std::move(pr), std::nullopt, "two_control_reduction"};
    }
    qopt::Protocol pr = dens ? qopt::solve_unconstrained_density(*p.rho_in, *p.rho_f, *b.omega1_max)
                             : qopt::solve_unconstrained(qopt::amplitudes_to_bloch(*p.psi_in),
                                                         qopt::amplitudes_to_bloch(*p.psi_f), *b.omega1_max);
    return AnalyticSolution{std::move(pr), std::nullopt, "unconstrained"};
  }
  if (b.omega2_max || !b.omega1_max) return std::nullopt;
  if (dens) {
    try {
      auto sol = qopt::solve_symmetric_constrained_density(*p.rho_in, *p.rho_f, *b.omega1_max, *b.gamma_max);
      return AnalyticSolution{std::move(sol.protocol), sol.diagnostics, "symmetric_constrained"};
    } catch (const qopt::UnsupportedStates&) {
      return std::nullopt;
    }
  }
  const auto pair = qopt::as_symmetric_pair(qopt::amplitudes_to_bloch(*p.psi_in), qopt::amplitudes_to_bloch(*p.psi_f));
  if (!pair) return std::nullopt;
  auto sol = qopt::solve_symmetric_constrained(*pair, *b.omega1_max, *b.gamma_max);
  return AnalyticSolution{std::move(sol.protocol), sol.diagnostics, "symmetric_constrained"};
}

qopt::ControlProblem oracle_problem(const qopt::ControlBounds& b) {
  qopt::ControlProblem p;
  p.gamma = b.gamma_max ? qopt::Channel::bounded(*b.gamma_max) : qopt::Channel::free();
  p.omega1 = b.omega1_max ? qopt::Channel::bounded(*b.omega1_max) : qopt::Channel::fixed(0.0);
  p.omega2 = b.omega2_max ? qopt::Channel::bounded(*b.omega2_max) : qopt::Channel::fixed(0.0);
  return p;
}

struct OracleArgs {
  qopt::SearchConfig cfg;
  void attach(CLI::App* app, int default_segments) {
    cfg.max_segments = default_segments;
    app->add_option("--max-segments", cfg.max_segments, "segment cap of the oracle search");
    app->add_option("--seed", cfg.seed, "seed for randomized oracle restarts");
    app->add_option("--duration-grid", cfg.duration_grid, "grid points per oracle parameter");
    app->add_option("--time-upper-bound", cfg.time_upper_bound, "discard schedules longer than this");
    app->add_flag("--free-controls", cfg.free_controls, "search Gamma on a 21-level grid");
  }
};

int cmd_solve(const ProblemArgs& args, bool oracle, bool si, qopt::SearchConfig cfg) {
  qopt::ProtocolDocument doc;
  doc.problem = args.spec();
  if (si) doc.problem.time_unit = "s";
  doc.provenance.timestamp = timestamp_now();
  auto sol = analytic_solve(doc.problem);
  if (sol) {
    doc.protocol = std::move(sol->protocol);
    doc.diagnostics = sol->diagnostics;
    doc.provenance.solver = sol->solver;
  } else {
    if (!oracle)
      throw qopt::UnsupportedStates(
          "no closed-form solver for these states and bounds; rerun with --oracle, or compare with `qopt verify`");
    const auto [in, f] = endpoints(doc.problem);
    const qopt::OracleResult r = qopt::brute_force_min_time(in, f, oracle_problem(doc.problem.bounds), cfg);
    if (!r.converged) throw qopt::UnsupportedStates("oracle search did not converge; raise --max-segments");
    doc.protocol = r.schedule;
    doc.provenance.solver = "oracle";
  }
  doc.t_min = doc.protocol.total_time();
  std::cout << qopt::to_json(doc);
  return kOk;
}

struct SimulateArgs {
  std::string protocol_file;
  double epsilon = 0.0;
  std::string ramp = "linear";
  std::optional<double> dt;
  double samples_per_unit_time = 100.0;
  bool compensate = false;
  std::string trajectory_file;
};

int cmd_simulate(const SimulateArgs& a) {
  std::ifstream in(a.protocol_file);
  if (!in) throw qopt::InvalidArgument("cannot read protocol file '" + a.protocol_file + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const qopt::ProtocolDocument doc = qopt::parse_protocol_document(buf.str());
  const auto [psi_in, psi_f] = endpoints(doc.problem);

  qopt::RampSpec ramp;
  if (a.ramp == "linear") {
    ramp = qopt::RampSpec::linear(a.epsilon);
  } else if (a.ramp == "smoothstep") {
    ramp = qopt::RampSpec::smoothstep(a.epsilon);
  } else if (a.ramp == "qsine") {
    ramp = qopt::RampSpec::quarter_sine(a.epsilon);
  } else {
    throw qopt::InvalidArgument("--ramp must be linear, smoothstep or qsine");
  }
  ramp.validate();
  if (!(a.samples_per_unit_time > 0.0)) throw qopt::InvalidArgument("--samples-per-unit-time must be positive");

  const qopt::Protocol base = a.compensate ? qopt::compensated_protocol(doc.protocol, ramp) : doc.protocol;
  qopt::Protocol realized = base;
  if (a.epsilon > 0.0) {
    const double dt = a.dt ? *a.dt : qopt::default_substep(base, a.epsilon);
    realized = qopt::ramped_protocol(base, ramp, dt);
  }
  const double fidelity = qopt::transfer_fidelity(qopt::propagate_exact(realized), psi_in, psi_f);
  const double bound = qopt::switching_fidelity_bound(doc.protocol, a.epsilon);
  const bool pass = fidelity >= std::min(bound, 1.0 - 1e-10);

  const qopt::Trajectory traj = qopt::sample_trajectory(realized, psi_in, 1.0 / a.samples_per_unit_time);
  std::ostream* report = &std::cerr;
  std::ofstream csv_file;
  if (a.trajectory_file.empty()) {
    qopt::write_trajectory_csv(std::cout, traj);
  } else {
    csv_file.open(a.trajectory_file);
    if (!csv_file) throw qopt::InvalidArgument("cannot write trajectory file '" + a.trajectory_file + "'");
    qopt::write_trajectory_csv(csv_file, traj);
    report = &std::cout;
  }
  const auto [w, c] = qopt::detail::coupling_scales(doc.protocol);
  const double scale = (w + c) * a.epsilon;
  *report << "protocol_time=" << qopt::format_number(realized.total_time()) << '\n';
  *report << "infidelity=" << qopt::format_number(1.0 - fidelity) << '\n';
  if (scale > 0.0) *report << "K=" << qopt::format_number((1.0 - fidelity) / (scale * scale)) << '\n';
  *report << "fidelity=" << qopt::format_number(fidelity) << " bound=" << qopt::format_number(bound)
          << " pass=" << paint(pass ? "true" : "false", pass) << std::endl;
  return kOk;
}

struct SweepArgs {
  double tan_alpha = 0.0;
  double omega = 1.0;
  double lo = 0.05;
  double hi = 100.0;
  std::size_t points = 200;
  bool log_grid = false;
};

int cmd_sweep(const SweepArgs& a) {
  const auto rows = qopt::constrained_sweep(qopt::SymmetricPair::from_tan_alpha(a.tan_alpha), a.omega, a.lo, a.hi,
                                            a.points, a.log_grid);
  qopt::write_sweep_csv(std::cout, rows);
  return kOk;
}

int cmd_verify(const ProblemArgs& args, std::optional<double> expect, qopt::SearchConfig cfg) {
  const qopt::ProblemSpec spec = args.spec();
  std::optional<double> analytic;
  std::string source = "none";
  if (expect) {
    analytic = *expect;
    source = "expected";
  } else if (const auto sol = analytic_solve(spec)) {
    analytic = sol->protocol.total_time();
    source = sol->solver;
  }
  const auto [in, f] = endpoints(spec);
  const qopt::OracleResult r = qopt::brute_force_min_time(in, f, oracle_problem(spec.bounds), cfg);

  json rep;
  rep["analytic_t_min"] = analytic ? json(*analytic) : json(nullptr);
  rep["analytic_source"] = source;
  rep["oracle"] = oracle_json(r);
  bool pass = r.converged;
  if (analytic) {
    const bool sound = r.best_time >= *analytic - 1e-6;
    const bool tight = r.best_time <= 1.01 * *analytic + 1e-9;
    rep["gap"] = *analytic > 0.0 ? number_or_null((r.best_time - *analytic) / *analytic) : json(nullptr);
    rep["sound"] = sound;
    rep["tight"] = tight;
    pass = pass && sound && tight;
  }
  rep["pass"] = pass;
  std::cout << rep.dump(2) << '\n';
  if (!pass) std::cerr << paint("verification failed", false) << '\n';
  return pass ? kOk : kVerifyFailed;
}

struct WitnessArgs {
  double c = 0.0;
  double omega = 1.0;
  std::optional<double> theta_in;
  std::optional<double> theta_f;
};

int cmd_witness(const WitnessArgs& a, qopt::SearchConfig cfg) {
  qopt::detail::require_positive(a.c, "--c");
  qopt::detail::require_positive(a.omega, "--omega");
  const double theta_c = std::atan2(a.omega, a.c);
  const double ti = a.theta_in.value_or(theta_c - 0.05);
  const double tf = a.theta_f.value_or(0.05);
  const qopt::WitnessReport w = qopt::multistep_witness(ti, tf, a.c, a.omega, cfg);
  json rep;
  rep["c"] = a.c;
  rep["omega"] = a.omega;
  rep["theta_c"] = w.theta_c;
  rep["theta_in"] = w.psi_in.theta();
  rep["theta_f"] = w.psi_f.theta();
  rep["fidelity_target"] = cfg.fidelity_target;
  rep["three_segment"] = oracle_json(w.three_segment);
  rep["three_segment_fails"] = w.three_segment_fails;
  rep["multistep"] = w.max_segments_searched >= 4 ? oracle_json(w.multistep) : json(nullptr);
  rep["multistep_segments"] = w.multistep_segments;
  rep["multistep_converges"] = w.multistep_converges;
  rep["max_segments_searched"] = w.max_segments_searched;
  rep["note"] = "oracle output; no reference values exist for this regime";
  std::cout << rep.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal-time control of a driven two-level system"};
  app.require_subcommand(1);

  ProblemArgs solve_args;
  bool solve_oracle = false;
  bool solve_si = false;
  std::string format = "json";
  OracleArgs solve_oracle_args;
  auto* solve = app.add_subcommand("solve", "minimal-time protocol as a JSON document");
  solve_args.attach(solve);
  solve_oracle_args.attach(solve, 5);
  solve->add_flag("--oracle", solve_oracle, "fall back to the brute-force oracle when no closed form applies");
  solve->add_flag("--si", solve_si, "label times in seconds (omega given in rad/s)");
  solve->add_option("--format", format, "output format")->check(CLI::IsMember({"json"}));

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "propagate a protocol document with finite switching ramps");
  simulate->add_option("--protocol", sim_args.protocol_file, "protocol document (JSON)")->required();
  simulate->add_option("--epsilon", sim_args.epsilon, "switching-ramp duration");
  simulate->add_option("--ramp", sim_args.ramp, "ramp shape")->check(CLI::IsMember({"linear", "smoothstep", "qsine"}));
  simulate->add_option("--dt", sim_args.dt, "integration sub-step (at most epsilon/20)");
  simulate->add_option("--samples-per-unit-time", sim_args.samples_per_unit_time, "trajectory sampling rate");
  simulate->add_flag("--compensate", sim_args.compensate, "shorten bang and off segments for linear ramps");
  simulate->add_option("--trajectory", sim_args.trajectory_file, "write the trajectory CSV here instead of stdout");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "closed-form constrained times over c/omega (CSV)");
  sweep->add_option("--tan-alpha", sweep_args.tan_alpha, "tan(alpha) of the symmetric pair")->required();
  sweep->add_option("--omega", sweep_args.omega, "fixed sigma_1 coupling");
  sweep->add_option("--c-over-omega-min", sweep_args.lo, "smallest c/omega");
  sweep->add_option("--c-over-omega-max", sweep_args.hi, "largest c/omega");
  sweep->add_option("--c-over-omega-points", sweep_args.points, "number of grid points");
  sweep->add_flag("--log-grid", sweep_args.log_grid, "logarithmic grid");

  ProblemArgs verify_args;
  std::optional<double> expect_tmin;
  bool verify_oracle = false;
  OracleArgs verify_oracle_args;
  auto* verify = app.add_subcommand("verify", "compare the closed form with the brute-force oracle (JSON)");
  verify_args.attach(verify);
  verify_oracle_args.attach(verify, 3);
  verify->add_option("--expect-tmin", expect_tmin, "check the oracle against this time instead of the closed form");
  verify->add_flag("--oracle", verify_oracle, "accepted for symmetry with solve; the oracle always runs");

  WitnessArgs witness_args;
  OracleArgs witness_oracle_args;
  auto* witness = app.add_subcommand("witness", "search for the multistep regime (JSON)");
  witness->add_option("--c", witness_args.c, "bound on |Gamma|")->required();
  witness->add_option("--omega", witness_args.omega, "fixed sigma_1 coupling");
  witness->add_option("--theta-in", witness_args.theta_in, "initial polar angle (default theta_c - 0.05)");
  witness->add_option("--theta-f", witness_args.theta_f, "target polar angle (default 0.05)");
  witness_oracle_args.attach(witness, 9);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << std::flush;
    return kInvalid;
  }

  try {
    if (*solve) return cmd_solve(solve_args, solve_oracle, solve_si, solve_oracle_args.cfg);
    if (*simulate) return cmd_simulate(sim_args);
    if (*sweep) return cmd_sweep(sweep_args);
    if (*verify) return cmd_verify(verify_args, expect_tmin, verify_oracle_args.cfg);
    if (*witness) return cmd_witness(witness_args, witness_oracle_args.cfg);
  } catch (const qopt::Error& e) {
    const int code = exit_code_for(e);
    std::cerr << "error: " << e.what() << '\n';
    if (code == kInvalid) {
      for (auto* sub : app.get_subcommands()) std::cerr << '\n' << sub->help();
    }
    return code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInvalid;
}

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

// Serialization: the versioned protocol document (JSON) and the trajectory
// and sweep tables (CSV). Numbers are written with 17 significant digits so
// that write(parse(write(doc))) reproduces write(doc) byte for byte.

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qopt/bloch.hpp"
#include "qopt/constrained.hpp"
#include "qopt/error.hpp"
#include "qopt/multicontrol.hpp"
#include "qopt/protocol.hpp"
#include "qopt/simulator.hpp"
#include "qopt/version.hpp"

namespace qopt {

inline constexpr const char* schema_version = "1";

struct ProblemSpec {
  std::optional<Spinor> psi_in;
  std::optional<Spinor> psi_f;
  std::optional<DensityMatrix> rho_in;
  std::optional<DensityMatrix> rho_f;
  ControlBounds bounds;
  std::optional<double> omega;
  std::string time_unit = "1/omega";
};

struct Provenance {
  std::string solver;
  std::string library_version = QOPT_VERSION;
  std::string timestamp;
};

struct ProtocolDocument {
  std::string schema_version = qopt::schema_version;
  ProblemSpec problem;
  Protocol protocol;
  double t_min = 0.0;
  std::optional<ConstrainedSolveDiagnostics> diagnostics;
  Provenance provenance;
};

/// "%.17g", or null for non-finite values.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail::io {

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

inline std::string num(double v) { return format_number(v); }
inline std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "null"; }
inline std::string cplx(const Complex& z) { return "[" + num(z.real()) + ", " + num(z.imag()) + "]"; }

inline std::string spinor(const std::optional<Spinor>& s) {
  if (!s) return "null";
  return "[" + cplx((*s)[0]) + ", " + cplx((*s)[1]) + "]";
}

inline std::string density(const std::optional<DensityMatrix>& d) {
  if (!d) return "null";
  const DensityMatrix& m = *d;
  return "[[" + cplx(m(0, 0)) + ", " + cplx(m(0, 1)) + "], [" + cplx(m(1, 0)) + ", " + cplx(m(1, 1)) + "]]";
}

inline std::string triple(const PauliVector& p) { return "[" + num(p.g3) + ", " + num(p.g1) + ", " + num(p.g2) + "]"; }

using json = nlohmann::json;

inline void require_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw InvalidArgument(std::string(where) + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items())
    if (!ok.count(key)) throw InvalidArgument(std::string(where) + ": unknown field '" + key + "'");
  for (const char* k : allowed)
    if (!j.contains(k)) throw InvalidArgument(std::string(where) + ": missing field '" + k + "'");
}

inline double get_num(const json& j, const char* where) {
  if (!j.is_number()) throw InvalidArgument(std::string(where) + ": expected a number");
  return j.get<double>();
}

inline std::optional<double> get_opt_num(const json& j, const char* where) {
  if (j.is_null()) return std::nullopt;
  return get_num(j, where);
}

inline std::string get_str(const json& j, const char* where) {
  if (!j.is_string()) throw InvalidArgument(std::string(where) + ": expected a string");
  return j.get<std::string>();
}

inline Complex get_cplx(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument(std::string(where) + ": expected [re, im]");
  return {get_num(j[0], where), get_num(j[1], where)};
}

inline std::optional<Spinor> get_spinor(const json& j, const char* where) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2) throw InvalidArgument(std::string(where) + ": expected two amplitudes");
  return Spinor{get_cplx(j[0], where), get_cplx(j[1], where)};
}

inline std::optional<DensityMatrix> get_density(const json& j, const char* where) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() || j[1].size() != 2)
    throw InvalidArgument(std::string(where) + ": expected a 2x2 matrix");
  return DensityMatrix::from_entries(get_cplx(j[0][0], where), get_cplx(j[0][1], where), get_cplx(j[1][0], where),
                                     get_cplx(j[1][1], where));
}

inline PauliVector get_triple(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 3) throw InvalidArgument(std::string(where) + ": expected [g3, g1, g2]");
  return {get_num(j[0], where), get_num(j[1], where), get_num(j[2], where)};
}

}  // namespace detail::io

inline std::string to_json(const ProtocolDocument& doc) {
  using namespace detail::io;
  std::ostringstream o;
  const ProblemSpec& p = doc.problem;
  o << "{\n";
  o << "  \"schema_version\": " << quote(doc.schema_version) << ",\n";
  o << "  \"problem\": {\n";
  o << "    \"psi_in\": " << spinor(p.psi_in) << ",\n";
  o << "    \"psi_f\": " << spinor(p.psi_f) << ",\n";
  o << "    \"rho_in\": " << density(p.rho_in) << ",\n";
  o << "    \"rho_f\": " << density(p.rho_f) << ",\n";
  o << "    \"bounds\": {\"gamma_max\": " << opt_num(p.bounds.gamma_max)
    << ", \"omega1_max\": " << opt_num(p.bounds.omega1_max) << ", \"omega2_max\": " << opt_num(p.bounds.omega2_max)
    << "},\n";
  o << "    \"omega\": " << opt_num(p.omega) << ",\n";
  o << "    \"time_unit\": " << quote(p.time_unit) << "\n";
  o << "  },\n";
  o << "  \"protocol\": [";
  const auto& segs = doc.protocol.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    o << (i ? ",\n" : "\n") << "    ";
    if (const auto* k = std::get_if<Kick>(&segs[i])) {
      o << "{\"kind\": \"kick\", \"controls\": " << triple(k->axis) << ", \"duration\": 0, \"kick_angle\": "
        << num(k->angle) << "}";
    } else {
      const auto& c = std::get<Constant>(segs[i]);
      o << "{\"kind\": \"constant\", \"controls\": " << triple(c.controls) << ", \"duration\": " << num(c.duration)
        << ", \"kick_angle\": 0}";
    }
  }
  o << (segs.empty() ? "],\n" : "\n  ],\n");
  o << "  \"t_min\": " << num(doc.t_min) << ",\n";
  if (doc.diagnostics) {
    const auto& d = *doc.diagnostics;
    o << "  \"diagnostics\": {\"rho\": " << num(d.rho) << ", \"regime\": " << quote(to_string(d.regime))
      << ", \"t_c\": " << num(d.t_c) << ", \"t_off\": " << num(d.t_off) << ", \"t_c1\": " << opt_num(d.t_c1)
      << ", \"t_c2\": " << opt_num(d.t_c2) << ", \"n_value\": " << num(d.n_value) << ", \"d_value\": " << num(d.d_value)
      << "},\n";
  } else {
    o << "  \"diagnostics\": null,\n";
  }
  o << "  \"provenance\": {\"solver\": " << quote(doc.provenance.solver)
    << ", \"library_version\": " << quote(doc.provenance.library_version)
    << ", \"timestamp\": " << quote(doc.provenance.timestamp) << "}\n";
  o << "}\n";
  return o.str();
}

inline ProtocolDocument parse_protocol_document(const std::string& text) {
  using namespace detail::io;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("protocol document: ") + e.what());
  }
  require_keys(j, {"schema_version", "problem", "protocol", "t_min", "diagnostics", "provenance"}, "document");
  ProtocolDocument doc;
  doc.schema_version = get_str(j["schema_version"], "schema_version");
  if (doc.schema_version != schema_version)
    throw InvalidArgument("protocol document: unsupported schema_version '" + doc.schema_version + "'");

  const json& p = j["problem"];
  require_keys(p, {"psi_in", "psi_f", "rho_in", "rho_f", "bounds", "omega", "time_unit"}, "problem");
  doc.problem.psi_in = get_spinor(p["psi_in"], "problem.psi_in");
  doc.problem.psi_f = get_spinor(p["psi_f"], "problem.psi_f");
  doc.problem.rho_in = get_density(p["rho_in"], "problem.rho_in");
  doc.problem.rho_f = get_density(p["rho_f"], "problem.rho_f");
  const json& b = p["bounds"];
  require_keys(b, {"gamma_max", "omega1_max", "omega2_max"}, "problem.bounds");
  doc.problem.bounds.gamma_max = get_opt_num(b["gamma_max"], "bounds.gamma_max");
  doc.problem.bounds.omega1_max = get_opt_num(b["omega1_max"], "bounds.omega1_max");
  doc.problem.bounds.omega2_max = get_opt_num(b["omega2_max"], "bounds.omega2_max");
  doc.problem.bounds.validate();
  doc.problem.omega = get_opt_num(p["omega"], "problem.omega");
  doc.problem.time_unit = get_str(p["time_unit"], "problem.time_unit");

  const json& segs = j["protocol"];
  if (!segs.is_array()) throw InvalidArgument("protocol: expected an array");
  std::vector<PulseSegment> out;
  for (const json& s : segs) {
    require_keys(s, {"kind", "controls", "duration", "kick_angle"}, "protocol segment");
    const std::string kind = get_str(s["kind"], "segment.kind");
    const PauliVector controls = get_triple(s["controls"], "segment.controls");
    const double duration = get_num(s["duration"], "segment.duration");
    const double angle = get_num(s["kick_angle"], "segment.kick_angle");
    if (kind == "kick") {
      if (duration != 0.0) throw InvalidArgument("kick segment: duration must be 0");
      out.push_back(Kick{controls, angle});
    } else if (kind == "constant") {
      if (angle != 0.0) throw InvalidArgument("constant segment: kick_angle must be 0");
      out.push_back(Constant{controls, duration});
    } else {
      throw InvalidArgument("segment.kind: expected \"kick\" or \"constant\"");
    }
  }
  doc.protocol = Protocol(std::move(out));
  doc.t_min = get_num(j["t_min"], "t_min");

  const json& d = j["diagnostics"];
  if (!d.is_null()) {
    require_keys(d, {"rho", "regime", "t_c", "t_off", "t_c1", "t_c2", "n_value", "d_value"}, "diagnostics");
    ConstrainedSolveDiagnostics diag;
    diag.rho = get_num(d["rho"], "diagnostics.rho");
    const std::string regime = get_str(d["regime"], "diagnostics.regime");
    if (regime == "BangBang") {
      diag.regime = Regime::BangBang;
    } else if (regime == "BangOffBang") {
      diag.regime = Regime::BangOffBang;
    } else {
      throw InvalidArgument("diagnostics.regime: unknown value '" + regime + "'");
    }
    diag.t_c = get_num(d["t_c"], "diagnostics.t_c");
    diag.t_off = get_num(d["t_off"], "diagnostics.t_off");
    diag.t_c1 = get_opt_num(d["t_c1"], "diagnostics.t_c1");
    diag.t_c2 = get_opt_num(d["t_c2"], "diagnostics.t_c2");
    diag.n_value = get_num(d["n_value"], "diagnostics.n_value");
    diag.d_value = get_num(d["d_value"], "diagnostics.d_value");
    doc.diagnostics = diag;
  }

  const json& pv = j["provenance"];
  require_keys(pv, {"solver", "library_version", "timestamp"}, "provenance");
  doc.provenance.solver = get_str(pv["solver"], "provenance.solver");
  doc.provenance.library_version = get_str(pv["library_version"], "provenance.library_version");
  doc.provenance.timestamp = get_str(pv["timestamp"], "provenance.timestamp");
  return doc;
}

inline constexpr const char* trajectory_csv_header = "t,theta,phi,x,y,z";
inline constexpr const char* sweep_csv_header = "c_over_omega,omega_t_min,omega_t_off,two_omega_t_c,regime";

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << trajectory_csv_header << '\n';
  for (const auto& s : traj.samples) {
    const auto r = s.state.vector();
    os << format_number(s.t) << ',' << format_number(s.state.theta()) << ',' << format_number(s.state.phi()) << ','
       << format_number(r[0]) << ',' << format_number(r[1]) << ',' << format_number(r[2]) << '\n';
  }
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << sweep_csv_header << '\n';
  for (const auto& r : rows)
    os << format_number(r.c_over_omega) << ',' << format_number(r.omega_t_min) << ',' << format_number(r.omega_t_off)
       << ',' << format_number(r.two_omega_t_c) << ',' << to_string(r.regime) << '\n';
}

}  // namespace qopt

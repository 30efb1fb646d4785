#pragma once

// File formats: state JSON ({"dim", "re", "im"} row-major), invariant
// report JSON/CSV, trajectory CSV, fringe CSV ("phase,intensity"),
// population JSON, MaxEnt problem and solution JSON.
//
// JSON output is written at 17 significant digits (lossless doubles) and
// CSV at 12; parsing goes through nlohmann::json.

#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pathpol/channels.hpp"
#include "pathpol/interferometry.hpp"
#include "pathpol/invariants.hpp"
#include "pathpol/maxent.hpp"
#include "pathpol/states.hpp"

namespace pathpol {

inline std::string fmt_sig(double v, int digits) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}
inline std::string fmt17(double v) { return fmt_sig(v, 17); }
inline std::string fmt12(double v) { return fmt_sig(v, 12); }

namespace detail {
inline nlohmann::json parse_json(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed ") + what + ": " + e.what());
  }
}

inline void append_array(std::ostringstream& out, const std::vector<double>& values) {
  out << '[';
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out << ',';
    out << fmt17(values[k]);
  }
  out << ']';
}
}  // namespace detail

// ---- state files ----------------------------------------------------------

template <std::size_t N>
std::string state_to_json(const CMat<N>& m) {
  std::ostringstream out;
  out << "{\n  \"dim\": " << N << ",\n  \"re\": [";
  for (std::size_t k = 0; k < N * N; ++k)
    out << (k ? ", " : "") << fmt17(m.a[k].real());
  out << "],\n  \"im\": [";
  for (std::size_t k = 0; k < N * N; ++k)
    out << (k ? ", " : "") << fmt17(m.a[k].imag());
  out << "]\n}\n";
  return out.str();
}

using ParsedMatrix = std::variant<CMat2, CMat4>;

inline ParsedMatrix matrix_from_json(const std::string& text) {
  const nlohmann::json j = detail::parse_json(text, "state JSON");
  if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im"))
    throw ParseError("state JSON needs fields dim, re, im");
  if (!j["dim"].is_number_integer())
    throw ParseError("state JSON field dim must be an integer");
  const int dim = j["dim"].get<int>();
  if (dim != 2 && dim != 4) throw DimensionMismatch("state dim must be 2 or 4");
  const std::size_t n2 = static_cast<std::size_t>(dim * dim);
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (!re.is_array() || !im.is_array() || re.size() != n2 || im.size() != n2)
    throw ParseError("state JSON re/im must be arrays of dim^2 numbers");
  auto fill = [&](auto& m) {
    for (std::size_t k = 0; k < n2; ++k) {
      if (!re[k].is_number() || !im[k].is_number())
        throw ParseError("state JSON entries must be numbers");
      m.a[k] = Complex(re[k].get<double>(), im[k].get<double>());
    }
  };
  if (dim == 2) {
    CMat2 m;
    fill(m);
    return m;
  }
  CMat4 m;
  fill(m);
  return m;
}

inline CMat4 joint_matrix_from_json(const std::string& text) {
  ParsedMatrix m = matrix_from_json(text);
  if (!std::holds_alternative<CMat4>(m))
    throw DimensionMismatch("expected a 4x4 joint state");
  return std::get<CMat4>(m);
}

// ---- invariant reports ----------------------------------------------------

// One row definition shared by the CSV and JSON writers; this is the
// documented column order.
inline const std::vector<std::pair<const char*, double InvariantReport::*>>&
report_fields() {
  static const std::vector<std::pair<const char*, double InvariantReport::*>> fields = {
      {"V_A", &InvariantReport::V_A},
      {"V_N", &InvariantReport::V_N},
      {"P", &InvariantReport::P},
      {"I2", &InvariantReport::I2},
      {"V", &InvariantReport::V},
      {"C", &InvariantReport::C},
      {"mu2", &InvariantReport::mu2},
      {"P_pol", &InvariantReport::P_pol},
      {"T_frob", &InvariantReport::T_frob},
      {"P_delta", &InvariantReport::P_delta},
      {"P1", &InvariantReport::P1},
      {"P2", &InvariantReport::P2},
      {"P3", &InvariantReport::P3},
      {"vn_ratio", &InvariantReport::vn_ratio},
      {"residual_main", &InvariantReport::residual_main},
      {"residual_full", &InvariantReport::residual_full},
      {"residual_pdelta", &InvariantReport::residual_pdelta},
  };
  return fields;
}

inline std::string report_to_json(const InvariantReport& r) {
  std::ostringstream out;
  out << "{\n";
  const auto& fields = report_fields();
  for (std::size_t k = 0; k < fields.size(); ++k)
    out << "  \"" << fields[k].first << "\": " << fmt17(r.*(fields[k].second))
        << (k + 1 < fields.size() ? ",\n" : "\n");
  out << "}\n";
  return out.str();
}

inline std::string report_csv_header() {
  std::string line;
  for (const auto& [name, member] : report_fields()) {
    if (!line.empty()) line += ',';
    line += name;
  }
  return line;
}

inline std::string report_to_csv_row(const InvariantReport& r) {
  std::string line;
  for (const auto& [name, member] : report_fields()) {
    if (!line.empty()) line += ',';
    line += fmt12(r.*member);
  }
  return line;
}

inline std::string report_to_csv(const InvariantReport& r) {
  return report_csv_header() + "\n" + report_to_csv_row(r) + "\n";
}

inline std::string trajectory_to_csv(const Trajectory& t) {
  std::ostringstream out;
  out << "param," << report_csv_header() << "\n";
  for (std::size_t k = 0; k < t.grid.size(); ++k)
    out << fmt12(t.grid[k]) << ',' << report_to_csv_row(t.reports[k]) << "\n";
  return out.str();
}

// ---- fringe records -------------------------------------------------------

inline std::string fringes_to_csv(const FringeRecord& r) {
  std::ostringstream out;
  out << "phase,intensity\n";
  for (std::size_t k = 0; k < r.phases.size(); ++k)
    out << fmt12(r.phases[k]) << ',' << fmt12(r.intensities[k]) << "\n";
  return out.str();
}

inline FringeRecord fringes_from_csv(const std::string& text) {
  FringeRecord r;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find("phase") != std::string::npos) continue;  // header row
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("fringe CSV line " + std::to_string(lineno) +
                       " is not 'phase,intensity'");
    try {
      std::size_t used = 0;
      const double phase = std::stod(line.substr(0, comma), &used);
      const double intensity = std::stod(line.substr(comma + 1), &used);
      r.phases.push_back(phase);
      r.intensities.push_back(intensity);
    } catch (const std::exception&) {
      throw ParseError("fringe CSV line " + std::to_string(lineno) +
                       " has a non-numeric field");
    }
  }
  if (r.phases.empty()) throw ParseError("fringe CSV contains no samples");
  for (double v : r.intensities)
    if (!(v >= 0.0)) throw ParseError("fringe CSV intensities must be >= 0");
  double mean = 0.0;
  for (double v : r.intensities) mean += v;
  mean /= static_cast<double>(r.intensities.size());
  r.i0 = mean > 0.0 ? mean : 1.0;  // baseline metadata; extraction ignores it
  return r;
}

inline Populations populations_from_json(const std::string& text) {
  const nlohmann::json j = detail::parse_json(text, "population JSON");
  if (!j.is_object() || !j.contains("n1") || !j.contains("n2") ||
      !j["n1"].is_number() || !j["n2"].is_number())
    throw ParseError("population JSON needs numeric fields n1 and n2");
  return Populations{j["n1"].get<double>(), j["n2"].get<double>()};
}

inline std::string extraction_to_json(const ExtractionResult& r) {
  std::ostringstream out;
  out << "{\n"
      << "  \"V_A\": " << fmt17(r.V_A) << ",\n"
      << "  \"V_N\": " << fmt17(r.V_N) << ",\n"
      << "  \"P\": " << fmt17(r.P) << ",\n"
      << "  \"I2\": " << fmt17(r.I2) << ",\n"
      << "  \"source\": "
      << (r.source == ExtractionResult::Source::FourPoint ? "\"four-point\""
                                                          : "\"least-squares\"")
      << ",\n"
      << "  \"positivity_violation\": " << (r.positivity_violation ? "true" : "false")
      << "\n}\n";
  return out.str();
}

// ---- MaxEnt problems and solutions ----------------------------------------

struct MaxEntProblem {
  std::vector<Constraint> constraints;
  MaxEntSettings settings;
};

// Either a bare array of {"observable": ..., "target": ...} entries or an
// object {"constraints": [...], "settings": {...}}. Observables are named
// "s<mu><nu>" or given as 16 coefficients in (mu, nu) row-major order.
inline MaxEntProblem problem_from_json(const std::string& text) {
  const nlohmann::json j = detail::parse_json(text, "problem JSON");
  MaxEntProblem problem;
  const nlohmann::json* list = nullptr;
  if (j.is_array()) {
    list = &j;
  } else if (j.is_object() && j.contains("constraints") && j["constraints"].is_array()) {
    list = &j["constraints"];
    if (j.contains("settings")) {
      const auto& s = j["settings"];
      if (!s.is_object()) throw ParseError("problem settings must be an object");
      if (s.contains("gradient_tolerance")) {
        if (!s["gradient_tolerance"].is_number())
          throw ParseError("gradient_tolerance must be a number");
        problem.settings.gradient_tolerance = s["gradient_tolerance"].get<double>();
      }
      if (s.contains("max_iterations")) {
        if (!s["max_iterations"].is_number_integer())
          throw ParseError("max_iterations must be an integer");
        problem.settings.max_iterations = s["max_iterations"].get<int>();
      }
    }
  } else {
    throw ParseError("problem JSON must be a constraint array or an object with one");
  }

  for (const auto& entry : *list) {
    if (!entry.is_object() || !entry.contains("observable") || !entry.contains("target") ||
        !entry["target"].is_number())
      throw ParseError("each constraint needs an observable and a numeric target");
    Observable obs;
    const auto& spec = entry["observable"];
    if (spec.is_string()) {
      obs = Observable::from_name(spec.get<std::string>());
    } else if (spec.is_array() && spec.size() == 16) {
      std::array<double, 16> c{};
      for (std::size_t k = 0; k < 16; ++k) {
        if (!spec[k].is_number())
          throw ParseError("observable coefficients must be numbers");
        c[k] = spec[k].get<double>();
      }
      obs = Observable::from_coefficients(c);
    } else {
      throw ParseError("observable must be a name like \"s12\" or 16 coefficients");
    }
    problem.constraints.push_back(make_constraint(std::move(obs), entry["target"].get<double>()));
  }
  return problem;
}

inline std::string solution_to_json(const MaxEntSolution& s, const SectorVerdict& v) {
  std::ostringstream out;
  out << "{\n"
      << "  \"converged\": " << (s.converged ? "true" : "false") << ",\n"
      << "  \"boundary\": " << (s.boundary ? "true" : "false") << ",\n"
      << "  \"iterations\": " << s.iterations << ",\n"
      << "  \"logZ\": " << fmt17(s.logZ) << ",\n"
      << "  \"lambdas\": ";
  detail::append_array(out, s.lambdas);
  out << ",\n  \"residuals\": ";
  detail::append_array(out, s.residuals);
  out << ",\n  \"verdict\": {\n"
      << "    \"N_frob\": " << fmt17(v.n_frob) << ",\n"
      << "    \"V_N\": " << fmt17(v.v_n) << ",\n"
      << "    \"s_only\": " << (v.s_only ? "true" : "false") << ",\n"
      << "    \"nonzero_A_target\": " << (v.nonzero_a_target ? "true" : "false") << ",\n"
      << "    \"proposition_holds\": " << (v.proposition_holds ? "true" : "false") << ",\n"
      << "    \"converse_holds\": " << (v.converse_holds ? "true" : "false") << "\n"
      << "  },\n"
      << "  \"state\": ";
  // inline the state object, reindented
  std::string state = state_to_json(s.state.matrix());
  while (!state.empty() && state.back() == '\n') state.pop_back();
  std::string indented;
  for (char ch : state) {
    indented += ch;
    if (ch == '\n') indented += "  ";
  }
  out << indented << "\n}\n";
  return out.str();
}

}  // namespace pathpol

#pragma once

// Command-line front end: analyze, verify, sweep, simulate, extract,
// maxent, sample. Thin argument plumbing over the library; all numerical
// behavior lives in the other headers.
//
// Exit codes: 0 success, 2 usage, 3 parse, 4 validation, 5 numerical
// non-convergence, 6 infeasible.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathpol/channels.hpp"
#include "pathpol/interferometry.hpp"
#include "pathpol/invariants.hpp"
#include "pathpol/io.hpp"
#include "pathpol/maxent.hpp"
#include "pathpol/states.hpp"

namespace pathpol::cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitValidation = 4;
constexpr int kExitNoConvergence = 5;
constexpr int kExitInfeasible = 6;

struct UsageError : Error {
  using Error::Error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_output(const std::string& path, const std::string& content,
                         std::ostream& stdout_stream) {
  if (path.empty() || path == "-") {
    stdout_stream << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open output file: " + path);
  out << content;
}

// "start:stop:count" (inclusive linspace) or a comma-separated list; an
// empty spec is an empty grid.
inline std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  if (spec.empty()) return grid;
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad grid number: '" + s + "'");
    }
  };
  if (spec.find(':') != std::string::npos) {
    const std::size_t c1 = spec.find(':');
    const std::size_t c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos)
      throw UsageError("grid must be start:stop:count or a comma list");
    const double start = to_double(spec.substr(0, c1));
    const double stop = to_double(spec.substr(c1 + 1, c2 - c1 - 1));
    long count = 0;
    try {
      count = std::stol(spec.substr(c2 + 1));
    } catch (const std::exception&) {
      throw UsageError("grid count must be an integer");
    }
    if (count < 1) throw UsageError("grid count must be >= 1");
    if (count == 1) {
      grid.push_back(start);
    } else {
      for (long k = 0; k < count; ++k)
        grid.push_back(start + (stop - start) * static_cast<double>(k) /
                                   static_cast<double>(count - 1));
    }
    return grid;
  }
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) grid.push_back(to_double(item));
  return grid;
}

struct StateInput {
  std::string preset = "";
  std::string state_file = "";
  double alpha = M_PI / 4.0;
  double beta = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  double chi = M_PI / 4.0;
  double p = 1.0;
  double dephase = -1.0;  // applied after construction when >= 0

  void add_options(CLI::App* cmd) {
    cmd->add_option("--preset", preset,
                    "named state: product|pathsup|polsup|entangled|bell|werner|maxmixed");
    cmd->add_option("--state", state_file, "state JSON file (dim 4)");
    cmd->add_option("--alpha", alpha, "pathsup amplitude angle (radians)");
    cmd->add_option("--beta", beta, "pathsup relative phase (radians)");
    cmd->add_option("--phi", phi, "polsup slit phase (radians)");
    cmd->add_option("--theta", theta, "polsup polarization angle (radians)");
    cmd->add_option("--chi", chi, "entangled Schmidt angle (radians)");
    cmd->add_option("--p", p, "werner mixing weight in [0,1]");
    cmd->add_option("--dephase", dephase,
                    "apply path dephasing of this strength after construction");
  }

  JointState build() const {
    if (preset.empty() == state_file.empty())
      throw UsageError("give exactly one of --preset or --state");
    JointState s = [&] {
      if (!state_file.empty())
        return pathpol::validate(joint_matrix_from_json(read_file(state_file)));
      if (preset == "product") return from_preset(StatePreset::product_pure());
      if (preset == "pathsup")
        return from_preset(StatePreset::path_superposition(alpha, beta));
      if (preset == "polsup")
        return from_preset(StatePreset::polarized_superposition(phi, theta));
      if (preset == "entangled")
        return from_preset(StatePreset::partially_entangled(chi));
      if (preset == "bell") return from_preset(StatePreset::bell());
      if (preset == "werner") return from_preset(StatePreset::werner(p));
      if (preset == "maxmixed") return from_preset(StatePreset::maximally_mixed());
      throw UsageError("unknown preset '" + preset + "'");
    }();
    if (dephase >= 0.0) s = apply(s, ChannelSpec::path_dephasing(dephase));
    return s;
  }
};

}  // namespace detail

// Closed-form invariant checks for the nine preset families, used by the
// verify command. Returns the worst absolute deviation seen.
inline double closed_form_case_error() {
  double worst = 0.0;
  auto track = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
  };
  auto grid = [](double lo, double hi, int n) {
    std::vector<double> g;
    for (int k = 0; k < n; ++k)
      g.push_back(lo + (hi - lo) * static_cast<double>(k) / (n - 1));
    return g;
  };

  {  // product pure state: full predictability
    const auto r = full_invariants(from_preset(StatePreset::product_pure()));
    track(r.V_A, 0.0);
    track(r.V_N, 0.0);
    track(r.P, 1.0);
    track(r.I2, 0.0);
  }
  // balanced and unbalanced path superpositions (covers the pure
  // superposition rows and the general (alpha, beta) family)
  for (double a : grid(0.0, M_PI / 2.0, 5))
    for (double b : grid(0.0, 2.0 * M_PI, 7)) {
      const auto s = from_preset(StatePreset::path_superposition(a, b));
      const auto inv = path_invariants(reduce_path(s));
      track(inv.V_A, std::sin(2 * a) * std::cos(b));
      track(inv.V_N, std::sin(2 * a) * std::sin(b));
      track(inv.P, std::cos(2 * a));
      track(inv.I2, 0.0);
      track(main_identity_residual(reduce_path(s)), 0.0);
    }
  {  // Bell pair: all path invariants vanish, I2 = 1
    const auto r = full_invariants(from_preset(StatePreset::bell()));
    track(r.V_A, 0.0);
    track(r.V_N, 0.0);
    track(r.P, 0.0);
    track(r.I2, 1.0);
  }
  for (double chi : grid(0.0, M_PI / 2.0, 9)) {  // partial entanglement
    const auto r = full_invariants(from_preset(StatePreset::partially_entangled(chi)));
    track(r.P, std::cos(2 * chi));
    track(r.I2, std::pow(std::sin(2 * chi), 2));
  }
  {  // maximally mixed
    const auto r = full_invariants(from_preset(StatePreset::maximally_mixed()));
    track(r.V_A, 0.0);
    track(r.V_N, 0.0);
    track(r.P, 0.0);
    track(r.I2, 1.0);
  }
  // dephased polarized superposition: the (gamma, phi) family; theta must
  // drop out of every path invariant
  for (double g : grid(0.0, 0.5, 5))
    for (double phi : grid(0.0, 2.0 * M_PI, 5))
      for (double theta : {0.0, 0.7, 1.3}) {
        const auto s = apply(from_preset(StatePreset::polarized_superposition(phi, theta)),
                             ChannelSpec::path_dephasing(g));
        const auto inv = path_invariants(reduce_path(s));
        track(inv.V_A, (1.0 - 2.0 * g) * std::cos(phi));
        track(inv.V_N, (1.0 - 2.0 * g) * std::sin(phi));
        track(inv.P, 0.0);
        track(inv.I2, 4.0 * g * (1.0 - g));
      }
  for (double p : grid(0.0, 1.0, 21)) {  // Werner family
    const auto r = full_invariants(from_preset(StatePreset::werner(p)));
    track(r.V_A, 0.0);
    track(r.V_N, 0.0);
    track(r.P, 0.0);
    track(r.I2, 1.0);
  }
  return worst;
}

// Concurrence carries a looser floating-point floor than the identity
// checks: on pure states the Wootters expression subtracts square roots of
// spectrum debris, so 1e-8 is the honest accuracy there (1e-10 on the full-
// rank Werner family).
struct ConcurrenceCaseError {
  double werner = 0.0;  // vs max{0, (3p-1)/2}
  double pure = 0.0;    // vs sqrt(I2) on pure presets
};

inline ConcurrenceCaseError concurrence_case_error() {
  ConcurrenceCaseError e;
  for (int k = 0; k <= 20; ++k) {
    const double p = 0.05 * k;
    const double c = concurrence(from_preset(StatePreset::werner(p)));
    e.werner = std::max(e.werner, std::abs(c - std::max(0.0, (3.0 * p - 1.0) / 2.0)));
  }
  const std::vector<StatePreset> pure = {
      StatePreset::product_pure(),
      StatePreset::path_superposition(0.7, 2.1),
      StatePreset::polarized_superposition(1.1, 0.4),
      StatePreset::partially_entangled(0.5),
      StatePreset::bell(),
  };
  for (const StatePreset& preset : pure) {
    const InvariantReport r = full_invariants(from_preset(preset));
    e.pure = std::max(e.pure, std::abs(r.C - std::sqrt(r.I2)));
  }
  return e;
}

struct VerifySummary {
  double case_error = 0.0;
  double werner_c_error = 0.0;
  double pure_ci_error = 0.0;
  double residual_main = 0.0;
  double residual_full = 0.0;
  double residual_pdelta = 0.0;
  double concurrence_excess = 0.0;  // max over samples of C - sqrt(I2)
  long samples = 0;

  bool pass(double tol) const {
    return case_error <= tol && residual_main <= tol && residual_full <= tol &&
           residual_pdelta <= tol && concurrence_excess <= 1e-10 &&
           werner_c_error <= 1e-10 && pure_ci_error <= 1e-8;
  }
};

inline VerifySummary run_verification(long samples, std::uint64_t seed) {
  VerifySummary v;
  v.samples = samples;
  v.case_error = closed_form_case_error();
  const ConcurrenceCaseError c = concurrence_case_error();
  v.werner_c_error = c.werner;
  v.pure_ci_error = c.pure;
  Xoshiro256pp rng(seed);
  for (long k = 0; k < samples; ++k) {
    const JointState s = sample_ginibre(rng);
    const InvariantReport r = full_invariants(s);
    v.residual_main = std::max(v.residual_main, r.residual_main);
    v.residual_full = std::max(v.residual_full, r.residual_full);
    v.residual_pdelta = std::max(v.residual_pdelta, r.residual_pdelta);
    v.concurrence_excess = std::max(v.concurrence_excess, r.C - std::sqrt(r.I2));
  }
  return v;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"polarized double-slit complementarity toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  double herm_tol = 1e-10;
  app.add_option("--herm-tol", herm_tol, "relative Hermiticity tolerance")
      ->capture_default_str();

  std::string out_path, format = "json";
  auto add_output = [&](CLI::App* cmd, bool with_format = true) {
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    if (with_format)
      cmd->add_option("--format", format, "json|csv")->capture_default_str();
  };

  // analyze
  auto* analyze = app.add_subcommand("analyze", "invariant report for one state");
  detail::StateInput analyze_input;
  analyze_input.add_options(analyze);
  double tol = 1e-12;
  analyze->add_option("--tol", tol, "identity residual tolerance")->capture_default_str();
  add_output(analyze);

  // verify
  auto* verify = app.add_subcommand("verify", "closed-form preset checks plus random-state sweep");
  long verify_n = 10000;
  std::uint64_t verify_seed = 42;
  double verify_tol = 1e-12;
  verify->add_option("-n,--samples", verify_n, "random samples")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "generator seed")->capture_default_str();
  verify->add_option("--tol", verify_tol, "identity residual tolerance")
      ->capture_default_str();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "invariant trajectory over a channel family");
  detail::StateInput sweep_input;
  sweep_input.add_options(sweep_cmd);
  std::string channel, grid_spec = "__default__";
  sweep_cmd->add_option("--channel", channel, "phase|dephase|werner")->required();
  sweep_cmd->add_option("--grid", grid_spec, "start:stop:count or comma list");
  add_output(sweep_cmd, false);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "synthesize fringe intensities");
  detail::StateInput sim_input;
  sim_input.add_options(simulate);
  std::string phases_spec;
  double sim_i0 = 1.0, sim_noise = 0.0;
  std::uint64_t sim_seed = 1;
  simulate->add_option("--phases", phases_spec,
                       "phase grid (default: the canonical four points)");
  simulate->add_option("--i0", sim_i0, "baseline intensity")->capture_default_str();
  simulate->add_option("--noise", sim_noise, "Gaussian noise sigma relative to i0")
      ->capture_default_str();
  simulate->add_option("--seed", sim_seed, "noise seed")->capture_default_str();
  add_output(simulate, false);

  // extract
  auto* extract = app.add_subcommand("extract", "recover invariants from fringe data");
  std::string fringes_path, pops_path, method = "auto";
  double n1 = -1.0, n2 = -1.0;
  extract->add_option("--fringes", fringes_path, "fringe CSV file")->required();
  extract->add_option("--n1", n1, "slit 1 population");
  extract->add_option("--n2", n2, "slit 2 population");
  extract->add_option("--pops", pops_path, "population JSON file {\"n1\":..,\"n2\":..}");
  extract->add_option("--method", method, "auto|fourpoint|lsq")->capture_default_str();
  add_output(extract, false);

  // maxent
  auto* maxent_cmd = app.add_subcommand("maxent", "maximum-entropy state inference");
  std::string problem_path;
  maxent_cmd->add_option("--problem", problem_path, "constraint JSON file")->required();
  add_output(maxent_cmd, false);

  // sample
  auto* sample = app.add_subcommand("sample", "one seeded random density matrix");
  std::uint64_t sample_seed = 1;
  sample->add_option("--seed", sample_seed, "generator seed")->capture_default_str();
  add_output(sample, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  hermiticity_tolerance() = herm_tol;

  try {
    if (*analyze) {
      const InvariantReport rep = full_invariants(analyze_input.build());
      if (format == "csv")
        detail::write_output(out_path, report_to_csv(rep), out);
      else if (format == "json")
        detail::write_output(out_path, report_to_json(rep), out);
      else
        throw UsageError("unknown format '" + format + "'");
      if (rep.residual_main > tol) {
        err << "identity residual " << fmt17(rep.residual_main) << " exceeds tolerance "
            << fmt17(tol) << "\n";
        return kExitValidation;
      }
      return kExitOk;
    }

    if (*verify) {
      const VerifySummary v = run_verification(verify_n, verify_seed);
      const bool pass = v.pass(verify_tol);
      out << "closed-form preset checks: max error = " << fmt12(v.case_error) << "\n"
          << "Werner concurrence:  max error = " << fmt12(v.werner_c_error) << "\n"
          << "pure-state |C - I|:  max error = " << fmt12(v.pure_ci_error) << "\n"
          << "random samples: n = " << v.samples << "\n"
          << "max residual_main   = " << fmt12(v.residual_main) << "\n"
          << "max residual_full   = " << fmt12(v.residual_full) << "\n"
          << "max residual_pdelta = " << fmt12(v.residual_pdelta) << "\n"
          << "max C - sqrt(I2)    = " << fmt12(v.concurrence_excess) << "\n"
          << "verify: " << (pass ? "PASS" : "FAIL") << "\n";
      return pass ? kExitOk : kExitValidation;
    }

    if (*sweep_cmd) {
      ChannelSpec::Kind kind;
      std::vector<double> grid;
      if (channel == "phase") {
        kind = ChannelSpec::Kind::PreparatoryPhase;
        for (int k = 0; k < 64; ++k) grid.push_back(2.0 * M_PI * k / 64.0);
      } else if (channel == "dephase") {
        kind = ChannelSpec::Kind::PathDephasing;
        grid = detail::parse_grid("0:0.5:11");
      } else if (channel == "werner") {
        kind = ChannelSpec::Kind::WernerMix;
        grid = detail::parse_grid("0:1:21");
      } else {
        throw UsageError("unknown channel '" + channel + "'");
      }
      if (grid_spec != "__default__") grid = detail::parse_grid(grid_spec);
      const Trajectory t = sweep(sweep_input.build(), kind, grid);
      detail::write_output(out_path, trajectory_to_csv(t), out);
      return kExitOk;
    }

    if (*simulate) {
      const PathState p = reduce_path(sim_input.build());
      const std::vector<double> phases =
          phases_spec.empty() ? canonical_phases() : detail::parse_grid(phases_spec);
      const FringeRecord r = synth_fringes(p, phases, sim_i0, sim_noise, sim_seed);
      if (r.clamp_warnings > 0)
        err << "warning: " << r.clamp_warnings
            << " noisy intensities clamped at zero\n";
      detail::write_output(out_path, fringes_to_csv(r), out);
      return kExitOk;
    }

    if (*extract) {
      const FringeRecord record = fringes_from_csv(detail::read_file(fringes_path));
      Populations pops;
      if (!pops_path.empty()) {
        pops = populations_from_json(detail::read_file(pops_path));
      } else if (n1 >= 0.0 && n2 >= 0.0) {
        pops = Populations{n1, n2};
      } else {
        throw UsageError("populations required: --n1/--n2 or --pops");
      }
      ExtractionResult result;
      if (method == "fourpoint") {
        result = extract_four_point(record, pops);
      } else if (method == "lsq") {
        result = extract_least_squares(record, pops);
      } else if (method == "auto") {
        try {
          result = extract_four_point(record, pops);
        } catch (const MissingPhase&) {
          result = extract_least_squares(record, pops);
        }
      } else {
        throw UsageError("unknown method '" + method + "'");
      }
      detail::write_output(out_path, extraction_to_json(result), out);
      if (result.positivity_violation)
        err << "note: extracted invariants exceed the positivity bound "
               "(noise artifact)\n";
      return kExitOk;
    }

    if (*maxent_cmd) {
      const MaxEntProblem problem = problem_from_json(detail::read_file(problem_path));
      const MaxEntSolution solution = solve(problem.constraints, problem.settings);
      const SectorVerdict verdict = sector_verdict(solution, problem.constraints);
      detail::write_output(out_path, solution_to_json(solution, verdict), out);
      if (solution.boundary) {
        // the fitted state is an epsilon-approximation of a pure limit
        // point; report it but signal saturation through the exit code
        err << "targets sit on the boundary of the feasible set\n";
        return kExitInfeasible;
      }
      return kExitOk;
    }

    if (*sample) {
      detail::write_output(out_path, state_to_json(sample_ginibre(sample_seed).matrix()),
                           out);
      return kExitOk;
    }
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ConvergenceError& e) {
    err << "no convergence: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}

}  // namespace pathpol::cli

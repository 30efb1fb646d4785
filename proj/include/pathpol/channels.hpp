#pragma once

// State transformations: the preparatory phase between the slits, the
// path-dephasing channel, and Werner mixing, plus invariant trajectories
// over parameter sweeps.

#include <cmath>
#include <vector>

#include "pathpol/invariants.hpp"
#include "pathpol/states.hpp"

namespace pathpol {

struct ChannelSpec {
  enum class Kind {
    PreparatoryPhase,  // |2> -> e^{i phi} |2>, any real phi
    PathDephasing,     // (1-g) rho + g (s3 x I) rho (s3 x I), g in [0, 1/2]
    WernerMix          // p rho + (1-p) I/4, p in [0, 1]
  };

  Kind kind = Kind::PreparatoryPhase;
  double parameter = 0.0;

  static ChannelSpec preparatory_phase(double phi) {
    return {Kind::PreparatoryPhase, phi};
  }
  static ChannelSpec path_dephasing(double gamma) {
    return {Kind::PathDephasing, gamma};
  }
  static ChannelSpec werner_mix(double p) { return {Kind::WernerMix, p}; }
};

inline JointState apply(const JointState& s, const ChannelSpec& c) {
  using Kind = ChannelSpec::Kind;
  const CMat4& rho = s.matrix();
  switch (c.kind) {
    case Kind::PreparatoryPhase: {
      if (!std::isfinite(c.parameter))
        throw BadParameter("preparatory phase must be finite");
      // Conjugation by diag(1, 1, e^{i phi}, e^{i phi}): rotates (V_A, V_N)
      // counterclockwise by phi and touches nothing else.
      const Complex u = std::polar(1.0, c.parameter);
      CMat4 out = rho;
      for (std::size_t j = 0; j < 4; ++j) {
        out(2, j) *= u;
        out(3, j) *= u;
      }
      for (std::size_t i = 0; i < 4; ++i) {
        out(i, 2) *= std::conj(u);
        out(i, 3) *= std::conj(u);
      }
      return validate(out);
    }
    case Kind::PathDephasing: {
      const double g = c.parameter;
      if (!(g >= 0.0 && g <= 0.5))
        throw BadParameter("dephasing strength must lie in [0, 1/2]");
      const CMat4& sz = pauli_tensor(3, 0).matrix;
      return validate((1.0 - g) * rho + g * (sz * rho * sz));
    }
    case Kind::WernerMix: {
      const double p = c.parameter;
      if (!(p >= 0.0 && p <= 1.0))
        throw BadParameter("mixing weight must lie in [0, 1]");
      return validate(p * rho + (0.25 * (1.0 - p)) * CMat4::identity());
    }
  }
  throw BadParameter("unknown channel kind");
}

struct Trajectory {
  std::vector<double> grid;
  std::vector<InvariantReport> reports;
};

// Applies each grid value independently to the same input state (a
// single-parameter family, not a composition) and attaches the full
// invariant report per point.
inline Trajectory sweep(const JointState& s, ChannelSpec::Kind family,
                        const std::vector<double>& grid) {
  Trajectory t;
  t.grid = grid;
  t.reports.reserve(grid.size());
  for (double value : grid)
    t.reports.push_back(full_invariants(apply(s, ChannelSpec{family, value})));
  return t;
}

}  // namespace pathpol

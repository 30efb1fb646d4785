#pragma once

// Forward simulation of phase-shifted fringe intensities
// I(phi) = I0 [1 + V_A cos(phi) + V_N sin(phi)] and inverse extraction of
// (V_A, V_N, P, I^2) from intensity records, by the four-point quotients on
// the canonical grid or by linear least squares on arbitrary grids.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pathpol/detail/symeig.hpp"
#include "pathpol/rng.hpp"
#include "pathpol/states.hpp"

namespace pathpol {

struct FringeRecord {
  std::vector<double> phases;       // radians
  std::vector<double> intensities;  // >= 0
  double i0 = 1.0;                  // synthesis baseline, > 0
  int clamp_warnings = 0;           // noisy samples clamped at zero
};

inline const std::vector<double>& canonical_phases() {
  static const std::vector<double> grid = {0.0, M_PI / 2.0, M_PI, 1.5 * M_PI};
  return grid;
}

inline FringeRecord synth_fringes(const PathState& p, const std::vector<double>& phases,
                                  double i0, double noise_sigma, std::uint64_t seed) {
  if (!(i0 > 0.0)) throw BadParameter("baseline intensity must be positive");
  if (!(noise_sigma >= 0.0)) throw BadParameter("noise sigma must be non-negative");
  FringeRecord r;
  r.phases = phases;
  r.i0 = i0;
  r.intensities.reserve(phases.size());
  Xoshiro256pp rng(seed);
  for (double phi : phases) {
    double value = i0 * (1.0 + p.bloch[0] * std::cos(phi) + p.bloch[1] * std::sin(phi));
    if (noise_sigma > 0.0) value += noise_sigma * i0 * rng.next_gaussian();
    if (value < 0.0) {
      value = 0.0;
      ++r.clamp_warnings;
    }
    r.intensities.push_back(value);
  }
  return r;
}

struct Populations {
  double n1 = 0.0;  // integrated intensity from slit 1
  double n2 = 0.0;  // integrated intensity from slit 2
};

struct ExtractionResult {
  enum class Source { FourPoint, LeastSquares };
  double V_A = 0.0;
  double V_N = 0.0;
  double P = 0.0;
  double I2 = 0.0;  // 1 - (V_A^2 + V_N^2 + P^2), unclamped under noise
  Source source = Source::FourPoint;
  // Set when V_A^2 + V_N^2 + P^2 > 1; a statistical diagnostic, not an error.
  bool positivity_violation = false;
};

namespace detail {
constexpr double kPhaseMatchTol = 1e-9;  // file-format rounding headroom

inline void finish_extraction(ExtractionResult& r, const Populations& pop) {
  const double total = pop.n1 + pop.n2;
  if (!(total > 0.0)) throw ZeroDenominator("slit populations sum to zero");
  r.P = (pop.n1 - pop.n2) / total;
  const double norm2 = r.V_A * r.V_A + r.V_N * r.V_N + r.P * r.P;
  r.I2 = 1.0 - norm2;
  r.positivity_violation = norm2 > 1.0;
}
}  // namespace detail

// Four-point phase shifting on the canonical grid {0, pi/2, pi, 3pi/2}:
//   V_A = (I(0) - I(pi)) / (I(0) + I(pi)),
//   V_N = (I(pi/2) - I(3pi/2)) / (I(pi/2) + I(3pi/2)).
// Repeated rows at one canonical phase are averaged.
inline ExtractionResult extract_four_point(const FringeRecord& r, const Populations& pop) {
  if (r.phases.size() != r.intensities.size())
    throw BadParameter("fringe record has mismatched lengths");
  double sum[4] = {0, 0, 0, 0};
  int count[4] = {0, 0, 0, 0};
  for (std::size_t k = 0; k < r.phases.size(); ++k) {
    for (int b = 0; b < 4; ++b) {
      if (std::abs(r.phases[k] - canonical_phases()[static_cast<std::size_t>(b)]) <=
          detail::kPhaseMatchTol) {
        sum[b] += r.intensities[k];
        ++count[b];
        break;
      }
    }
  }
  static const char* names[4] = {"0", "pi/2", "pi", "3pi/2"};
  for (int b = 0; b < 4; ++b)
    if (count[b] == 0)
      throw MissingPhase(std::string("no intensity sample at phase ") + names[b]);
  const double bucket[4] = {sum[0] / count[0], sum[1] / count[1], sum[2] / count[2],
                            sum[3] / count[3]};

  ExtractionResult out;
  out.source = ExtractionResult::Source::FourPoint;
  const double den_a = bucket[0] + bucket[2];
  const double den_n = bucket[1] + bucket[3];
  if (den_a == 0.0 || den_n == 0.0)
    throw ZeroDenominator("opposing fringe intensities sum to zero");
  out.V_A = (bucket[0] - bucket[2]) / den_a;
  out.V_N = (bucket[1] - bucket[3]) / den_n;
  detail::finish_extraction(out, pop);
  return out;
}

// Least-squares fit of (I0, I0 V_A, I0 V_N) against the design
// [1, cos(phi), sin(phi)]; works on any grid with three independent columns.
inline ExtractionResult extract_least_squares(const FringeRecord& r,
                                              const Populations& pop) {
  if (r.phases.size() != r.intensities.size())
    throw BadParameter("fringe record has mismatched lengths");

  std::size_t distinct = 0;
  for (std::size_t k = 0; k < r.phases.size(); ++k) {
    bool seen = false;
    for (std::size_t j = 0; j < k && !seen; ++j)
      seen = std::abs(r.phases[k] - r.phases[j]) <= detail::kPhaseMatchTol;
    if (!seen) ++distinct;
  }
  if (distinct < 3)
    throw RankDeficient("least-squares extraction needs >= 3 distinct phases");

  // Normal equations; the 3x3 system is tiny and the canonical grids are
  // perfectly conditioned.
  std::vector<double> m(9, 0.0), b(3, 0.0);
  for (std::size_t k = 0; k < r.phases.size(); ++k) {
    const double row[3] = {1.0, std::cos(r.phases[k]), std::sin(r.phases[k])};
    for (int i = 0; i < 3; ++i) {
      b[static_cast<std::size_t>(i)] += row[i] * r.intensities[k];
      for (int j = 0; j < 3; ++j)
        m[static_cast<std::size_t>(3 * i + j)] += row[i] * row[j];
    }
  }
  const detail::SymEig eig = detail::sym_eig(m, 3);
  if (!(eig.values[2] > 1e-12 * eig.values[0]))
    throw RankDeficient("fringe design matrix is rank deficient");
  const std::vector<double> x = detail::solve_spd(eig, b);

  if (std::abs(x[0]) < 1e-300)
    throw ZeroDenominator("fitted baseline intensity is zero");
  ExtractionResult out;
  out.source = ExtractionResult::Source::LeastSquares;
  out.V_A = x[1] / x[0];
  out.V_N = x[2] / x[0];
  detail::finish_extraction(out, pop);
  return out;
}

}  // namespace pathpol

#pragma once

// Scalar invariants of the joint state and its path reduction, the
// complementarity identity and its full-state generalizations, Wootters
// concurrence, and the polarimetric purity indices.

#include <algorithm>
#include <array>
#include <cmath>

#include "pathpol/matcore.hpp"
#include "pathpol/observables.hpp"
#include "pathpol/states.hpp"

namespace pathpol {

struct PathInvariants {
  double V_A = 0.0;  // in-phase visibility, Bloch x
  double V_N = 0.0;  // quadrature visibility, Bloch y
  double P = 0.0;    // predictability, Bloch z
  double I2 = 0.0;   // mixedness squared, clamped to [0, 1]
};

// The three equivalent routes to the mixedness: 1 - |r|^2, 4 det rho_cam,
// and 2 (1 - Tr rho_cam^2). They agree to rounding on any valid state.
struct MixednessRoutes {
  double bloch;
  double det;
  double purity;
};

inline MixednessRoutes mixedness_routes(const PathState& p) {
  MixednessRoutes m{};
  const auto& r = p.bloch;
  m.bloch = 1.0 - (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  m.det = 4.0 * (p.matrix(0, 0).real() * p.matrix(1, 1).real() -
                 std::norm(p.matrix(0, 1)));
  double tr2 = 0.0;
  for (const Complex& v : p.matrix.a) tr2 += std::norm(v);
  m.purity = 2.0 * (1.0 - tr2);
  return m;
}

inline PathInvariants path_invariants(const PathState& p) {
  const MixednessRoutes m = mixedness_routes(p);
  const double spread = std::max({std::abs(m.bloch - m.det),
                                  std::abs(m.bloch - m.purity),
                                  std::abs(m.det - m.purity)});
  if (spread > 1e-12)
    throw Error("mixedness routes disagree beyond tolerance");
  PathInvariants inv;
  inv.V_A = p.bloch[0];
  inv.V_N = p.bloch[1];
  inv.P = p.bloch[2];
  inv.I2 = std::clamp(m.bloch, 0.0, 1.0);
  return inv;
}

// |V_A^2 + V_N^2 + P^2 + I^2 - 1| with I^2 taken from the determinant route
// and nothing clamped; this is the headline check.
inline double main_identity_residual(const PathState& p) {
  const auto& r = p.bloch;
  const double i2 = mixedness_routes(p).det;
  return std::abs(r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + i2 - 1.0);
}

// Wootters concurrence: spin-flip rho_tilde = (s2 x s2) rho^* (s2 x s2),
// spectrum of rho rho_tilde through the Hermitian surrogate
// sqrt(rho) rho_tilde sqrt(rho), then max{0, sqrt l1 - sqrt l2 - sqrt l3 - sqrt l4}.
inline double concurrence(const JointState& s) {
  const CMat4& rho = s.matrix();
  const CMat4& flip = pauli_tensor(2, 2).matrix;
  const CMat4 rho_tilde = flip * rho.conjugate() * flip;
  const CMat4 root = mat_sqrt_psd(rho);
  // Hermitian in exact arithmetic; symmetrize away the product rounding so
  // the near-zero case (separable states) stays well-posed.
  CMat4 surrogate = root * rho_tilde * root;
  surrogate = 0.5 * (surrogate + surrogate.adjoint());
  const auto spec = eig_hermitian(surrogate);

  std::array<double, 4> lam = spec.eigenvalues;  // already descending
  for (double& v : lam) {
    if (v < -1e-10) throw NotPSD(v);
    v = std::max(v, 0.0);
  }
  const double c = std::sqrt(lam[0]) - std::sqrt(lam[1]) - std::sqrt(lam[2]) -
                   std::sqrt(lam[3]);
  return std::max(0.0, c);
}

// Every scalar the library reports for one state, plus the identity
// residuals. Residuals are unsigned and unclamped; clamping applies only to
// the derived convenience fields.
struct InvariantReport {
  double V_A = 0.0;
  double V_N = 0.0;
  double P = 0.0;
  double I2 = 0.0;
  double V = 0.0;        // total visibility, sqrt(V_A^2 + V_N^2)
  double C = 0.0;        // concurrence
  double mu2 = 0.0;      // global purity Tr rho^2
  double P_pol = 0.0;    // |r_pol|
  double T_frob = 0.0;   // ||T||_F
  double P_delta = 0.0;  // overall polarimetric purity
  double P1 = 0.0;       // eigenvalue-ordered purity indices
  double P2 = 0.0;
  double P3 = 0.0;
  double vn_ratio = 0.0;  // V_N^2 / (V_A^2 + V_N^2), 0 when V = 0
  double residual_main = 0.0;
  double residual_full = 0.0;
  double residual_pdelta = 0.0;
};

inline InvariantReport full_invariants(const JointState& s) {
  InvariantReport rep;

  const PathState path = reduce_path(s);
  const PathInvariants pi = path_invariants(path);
  rep.V_A = pi.V_A;
  rep.V_N = pi.V_N;
  rep.P = pi.P;
  rep.I2 = pi.I2;
  rep.V = std::hypot(pi.V_A, pi.V_N);
  const double v2 = pi.V_A * pi.V_A + pi.V_N * pi.V_N;
  rep.vn_ratio = v2 > 0.0 ? pi.V_N * pi.V_N / v2 : 0.0;
  rep.residual_main = main_identity_residual(path);

  rep.C = concurrence(s);

  const FanoForm f = to_fano(s);
  rep.P_pol = std::sqrt(f.r_pol[0] * f.r_pol[0] + f.r_pol[1] * f.r_pol[1] +
                        f.r_pol[2] * f.r_pol[2]);
  rep.T_frob = f.T.frobenius();

  double mu2 = 0.0;  // Tr rho^2 = ||rho||_F^2 for Hermitian rho
  for (const Complex& v : s.matrix().a) mu2 += std::norm(v);
  rep.mu2 = mu2;

  // Purity indices from the ordered spectrum; tiny negative eigenvalues are
  // rounding debris on the positivity boundary.
  auto lam = eig_hermitian(s.matrix()).eigenvalues;
  for (double& v : lam) v = std::max(v, 0.0);
  rep.P1 = std::clamp(lam[0] - lam[1], 0.0, 1.0);
  rep.P2 = std::clamp(lam[0] + lam[1] - 2.0 * lam[2], rep.P1, 1.0);
  rep.P3 = std::clamp(lam[0] + lam[1] + lam[2] - 3.0 * lam[3], rep.P2, 1.0);

  const double lhs = rep.V_A * rep.V_A + rep.V_N * rep.V_N + rep.P * rep.P +
                     rep.P_pol * rep.P_pol + rep.T_frob * rep.T_frob;
  rep.residual_full = std::abs(lhs - (4.0 * mu2 - 1.0));

  // P_delta from the spectral route; cross-checks the eigensolver against
  // the trace arithmetic of the left-hand side.
  double sum_sq = 0.0;
  for (double v : lam) sum_sq += v * v;
  const double pdelta2 = (4.0 / 3.0) * (sum_sq - 0.25);
  rep.residual_pdelta = std::abs(lhs - 3.0 * pdelta2);
  rep.P_delta = std::sqrt(std::max(pdelta2, 0.0));

  return rep;
}

}  // namespace pathpol

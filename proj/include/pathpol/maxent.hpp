#pragma once

// Maximum-entropy state inference: fit rho* = exp(-sum lambda_k O_k) / Z to
// expectation constraints Tr(rho O_k) = o_k by minimizing the convex dual
// F(lambda) = ln Z + sum lambda_k o_k with a damped Newton iteration.
//
// The gradient is o_k - <O_k>; the Hessian is the Kubo-Mori covariance of
// the constrained observables, evaluated in the eigenbasis of the exponent
// with divided differences of exp (Daleckii-Krein), so it is exact for
// Hermitian exponents.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pathpol/detail/symeig.hpp"
#include "pathpol/observables.hpp"
#include "pathpol/states.hpp"

namespace pathpol {

enum class ConstraintSector { S, A, Mixed };

inline ConstraintSector classify_sector(const Observable& o) {
  double s_weight = 0.0, a_weight = 0.0;
  for (int k = 0; k < 16; ++k) {
    const double c = std::abs(o.coefficients[static_cast<std::size_t>(k)]);
    if (pauli_tensors()[static_cast<std::size_t>(k)].sector == Sector::A)
      a_weight += c;
    else
      s_weight += c;
  }
  const double threshold = 1e-12 * std::max(1.0, s_weight + a_weight);
  const bool has_s = s_weight > threshold;
  const bool has_a = a_weight > threshold;
  if (has_a && has_s) return ConstraintSector::Mixed;
  return has_a ? ConstraintSector::A : ConstraintSector::S;
}

struct Constraint {
  Observable observable;
  double target = 0.0;
  ConstraintSector sector = ConstraintSector::S;
};

// Rejects targets beyond the observable's operator norm: no state reaches them.
inline Constraint make_constraint(Observable o, double target) {
  if (!std::isfinite(target)) throw BadParameter("constraint target must be finite");
  const auto spec = eig_hermitian(o.matrix);
  const double op_norm =
      std::max(std::abs(spec.eigenvalues[0]), std::abs(spec.eigenvalues[3]));
  if (std::abs(target) > op_norm + 1e-9)
    throw Infeasible("target " + std::to_string(target) +
                     " exceeds the observable's operator norm " +
                     std::to_string(op_norm));
  Constraint c;
  c.sector = classify_sector(o);
  c.observable = std::move(o);
  c.target = target;
  return c;
}

struct MaxEntSettings {
  double gradient_tolerance = 1e-11;
  int max_iterations = 200;
  double lambda_bound = 1e6;          // divergence bound; beyond it the
                                      // target sits on/outside the boundary
  double dependence_condition = 1e12; // Gram condition cap at lambda = 0
  int max_backtracks = 30;
};

struct MaxEntSolution {
  std::vector<double> lambdas;
  JointState state;
  double logZ = 0.0;
  std::vector<double> residuals;  // |<O_k> - o_k|
  int iterations = 0;
  bool converged = false;
  // rho* is effectively rank-deficient: the data sit on the boundary of the
  // feasible set and the true maximizer is a limit point.
  bool boundary = false;
};

namespace detail {

// (e^x - e^y)/(x - y) with the confluent limit e^x. Near-equal arguments
// use the cancellation-free e^{(x+y)/2} sinh(d)/d form; far-apart ones the
// direct quotient, where sinh would overflow and no cancellation occurs.
inline double exp_divided_difference(double x, double y) {
  const double d = 0.5 * (x - y);
  if (std::abs(d) >= 1.0) return (std::exp(x) - std::exp(y)) / (x - y);
  double sinhc;
  if (std::abs(d) < 1e-4) {
    const double d2 = d * d;
    sinhc = 1.0 + d2 / 6.0 + d2 * d2 / 120.0;
  } else {
    sinhc = std::sinh(d) / d;
  }
  return std::exp(0.5 * (x + y)) * sinhc;
}

struct GibbsPoint {
  double logZ = 0.0;
  CMat4 rho;
  Spectrum<4> spec;                 // of the exponent L = sum lambda_k O_k
  std::array<double, 4> probs{};    // eigenvalues of rho, aligned with spec
  double zs = 0.0;                  // shifted partition sum
  std::vector<double> expectations; // <O_k> on rho
};

inline GibbsPoint gibbs_point(const std::vector<double>& lambdas,
                              const std::vector<Constraint>& constraints) {
  CMat4 exponent;
  for (std::size_t k = 0; k < constraints.size(); ++k)
    exponent = exponent + lambdas[k] * constraints[k].observable.matrix;

  GibbsPoint g;
  g.spec = eig_hermitian(exponent);
  const double shift = g.spec.eigenvalues[3];  // smallest h dominates exp(-h)
  g.zs = 0.0;
  for (double h : g.spec.eigenvalues) g.zs += std::exp(-(h - shift));
  g.logZ = -shift + std::log(g.zs);
  for (std::size_t i = 0; i < 4; ++i)
    g.probs[i] = std::exp(-(g.spec.eigenvalues[i] - shift)) / g.zs;
  g.rho = compose_spectral(g.spec, g.probs);

  g.expectations.reserve(constraints.size());
  for (const Constraint& c : constraints)
    g.expectations.push_back(trace_product(g.rho, c.observable.matrix).real());
  return g;
}

// Kubo-Mori covariance, the exact Hessian of ln Z.
inline std::vector<double> dual_hessian(const GibbsPoint& g,
                                        const std::vector<Constraint>& constraints) {
  const std::size_t n = constraints.size();
  const double shift = g.spec.eigenvalues[3];

  std::vector<CMat4> in_basis(n);  // U^dagger O_k U
  for (std::size_t k = 0; k < n; ++k)
    in_basis[k] = g.spec.eigenvectors.adjoint() * constraints[k].observable.matrix *
                  g.spec.eigenvectors;

  std::array<std::array<double, 4>, 4> psi{};
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t l = 0; l < 4; ++l)
      psi[m][l] = exp_divided_difference(-(g.spec.eigenvalues[m] - shift),
                                         -(g.spec.eigenvalues[l] - shift));

  std::vector<double> h(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t l = 0; l < 4; ++l)
          acc += (in_basis[j](m, l) * std::conj(in_basis[k](m, l))).real() * psi[m][l];
      const double value = acc / g.zs - g.expectations[j] * g.expectations[k];
      h[j * n + k] = h[k * n + j] = value;
    }
  return h;
}

}  // namespace detail

inline double log_partition(const std::vector<double>& lambdas,
                            const std::vector<Constraint>& constraints) {
  return detail::gibbs_point(lambdas, constraints).logZ;
}

inline MaxEntSolution solve(const std::vector<Constraint>& constraints,
                            const MaxEntSettings& settings = {}) {
  const std::size_t n = constraints.size();
  std::vector<double> lambdas(n, 0.0);

  if (n > 0) {
    // Dependent (or near-dependent) traceless parts make the dual
    // degenerate; detect at the maximally mixed start.
    const detail::GibbsPoint origin = detail::gibbs_point(lambdas, constraints);
    const detail::SymEig gram = detail::sym_eig(detail::dual_hessian(origin, constraints), n);
    const double largest = gram.values.front();
    const double smallest = gram.values.back();
    if (!(smallest > 0.0) || largest / smallest > settings.dependence_condition)
      throw DependentConstraints(smallest > 0.0 ? largest / smallest
                                                : std::numeric_limits<double>::infinity());
  }

  detail::GibbsPoint point = detail::gibbs_point(lambdas, constraints);
  auto dual_value = [&](const detail::GibbsPoint& g, const std::vector<double>& l) {
    double f = g.logZ;
    for (std::size_t k = 0; k < n; ++k) f += l[k] * constraints[k].target;
    return f;
  };

  bool converged = n == 0;
  int iterations = 0;
  for (int iter = 0; iter < settings.max_iterations && !converged; ++iter) {
    iterations = iter + 1;

    double lambda_norm = 0.0;
    for (double l : lambdas) lambda_norm = std::max(lambda_norm, std::abs(l));
    if (lambda_norm > settings.lambda_bound)
      throw Infeasible("multipliers diverged; targets lie on or outside the feasible set");

    std::vector<double> gradient(n);
    double grad_norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      gradient[k] = constraints[k].target - point.expectations[k];
      grad_norm = std::max(grad_norm, std::abs(gradient[k]));
    }
    if (grad_norm <= settings.gradient_tolerance) {
      converged = true;
      iterations = iter;
      break;
    }

    const detail::SymEig eig =
        detail::sym_eig(detail::dual_hessian(point, constraints), n);
    std::vector<double> step = detail::solve_spd(eig, gradient);
    for (double& s : step) s = -s;

    // Backtracking on the dual value; the tolerance absorbs rounding noise
    // near the optimum where the true decrease falls below epsilon. Trial
    // points beyond the divergence bound are rejected unevaluated so the
    // exploding steps of an infeasible problem cannot overflow.
    const double f0 = dual_value(point, lambdas);
    double alpha = 1.0;
    bool accepted = false;
    bool all_beyond_bound = true;
    for (int bt = 0; bt <= settings.max_backtracks; ++bt) {
      std::vector<double> trial = lambdas;
      double trial_norm = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        trial[k] += alpha * step[k];
        trial_norm = std::max(trial_norm, std::abs(trial[k]));
      }
      if (!(trial_norm <= 10.0 * settings.lambda_bound)) {
        alpha *= 0.5;
        continue;
      }
      all_beyond_bound = false;
      detail::GibbsPoint trial_point = detail::gibbs_point(trial, constraints);
      if (dual_value(trial_point, trial) <= f0 + 1e-14 * (1.0 + std::abs(f0))) {
        lambdas = std::move(trial);
        point = std::move(trial_point);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (all_beyond_bound)
        throw Infeasible(
            "Newton steps diverged; targets lie on or outside the feasible set");
      break;  // numerical floor; convergence is re-checked below
    }
  }

  if (!converged) {
    double grad_norm = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      grad_norm = std::max(grad_norm,
                           std::abs(constraints[k].target - point.expectations[k]));
    if (grad_norm <= settings.gradient_tolerance)
      converged = true;
    else
      throw NotConverged("dual Newton hit the iteration cap with gradient norm " +
                         std::to_string(grad_norm));
  }

  std::vector<double> residuals(n);
  for (std::size_t k = 0; k < n; ++k)
    residuals[k] = std::abs(point.expectations[k] - constraints[k].target);

  const double min_prob = *std::min_element(point.probs.begin(), point.probs.end());
  return MaxEntSolution{lambdas,
                        validate(point.rho),
                        point.logZ,
                        std::move(residuals),
                        iterations,
                        converged,
                        min_prob <= 1e-9};
}

// The structural claims of the sector decomposition: with no A-sector
// constraint the Gibbs state is real symmetric (N* = 0, so V_N* = 0); any
// nonzero A-sector target forces N* != 0.
struct SectorVerdict {
  double n_frob = 0.0;           // ||N*||_F
  double v_n = 0.0;              // V_N of the reduced path state
  bool s_only = false;           // no constraint touches the A sector
  bool nonzero_a_target = false; // some pure-A constraint with target != 0
  bool proposition_holds = true;
  bool converse_holds = true;
};

inline SectorVerdict sector_verdict(const MaxEntSolution& solution,
                                    const std::vector<Constraint>& constraints) {
  SectorVerdict v;
  const SectorPair<4> split = hermitian_split(solution.state.matrix());
  v.n_frob = split.antisym.frobenius();
  v.v_n = reduce_path(solution.state).bloch[1];

  v.s_only = true;
  for (const Constraint& c : constraints) {
    if (c.sector != ConstraintSector::S) v.s_only = false;
    if (c.sector == ConstraintSector::A && c.target != 0.0) v.nonzero_a_target = true;
  }
  if (v.s_only) v.proposition_holds = v.n_frob <= 1e-10;
  if (v.nonzero_a_target) v.converse_holds = v.n_frob > 0.0;
  return v;
}

// Max deviation between the analytic gradient d lnZ / d lambda_k = -<O_k>
// and two-sided finite differences; a solver self-test.
inline double logZ_gradient_check(const std::vector<double>& lambdas,
                                  const std::vector<Constraint>& constraints) {
  const detail::GibbsPoint point = detail::gibbs_point(lambdas, constraints);
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    std::vector<double> up = lambdas, down = lambdas;
    up[k] += h;
    down[k] -= h;
    const double fd = (log_partition(up, constraints) - log_partition(down, constraints)) /
                      (2.0 * h);
    worst = std::max(worst, std::abs(fd - (-point.expectations[k])));
  }
  return worst;
}

}  // namespace pathpol

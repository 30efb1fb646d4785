#pragma once

// Internal helper: Jacobi eigendecomposition and an eigenbasis solve for
// small real symmetric systems (least-squares normal equations, dual
// Newton Hessians). Not part of the public surface.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "pathpol/errors.hpp"

namespace pathpol::detail {

struct SymEig {
  std::size_t n = 0;
  std::vector<double> values;   // descending
  std::vector<double> vectors;  // column-major, column k pairs with values[k]
};

inline SymEig sym_eig(std::vector<double> a, std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  // enforce exact symmetry
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (a[i * n + j] + a[j * n + i]);
      a[i * n + j] = a[j * n + i] = m;
    }

  double scale = 0.0;
  for (double x : a) scale += x * x;
  scale = std::sqrt(scale);
  const double tol = 1e-15 * scale;

  auto offdiag = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && scale > 0.0; ++sweep) {
    if (offdiag() <= tol) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= tol / (2.0 * n)) continue;
        const double tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double sgn = tau >= 0.0 ? 1.0 : -1.0;
        const double t = sgn / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
        a[p * n + q] = a[q * n + p] = 0.0;
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x] > a[y * n + y];
  });

  SymEig out;
  out.n = n;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = v[i * n + order[k]];
  }
  return out;
}

// Solve H x = b for symmetric PSD H through the eigenbasis, flooring tiny
// eigenvalues so near-singular directions do not blow up the step.
inline std::vector<double> solve_spd(const SymEig& e, const std::vector<double>& b,
                                     double rel_floor = 1e-13) {
  const std::size_t n = e.n;
  const double floor = std::max(e.values.empty() ? 0.0 : e.values[0] * rel_floor, 1e-300);
  std::vector<double> x(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double proj = 0.0;
    for (std::size_t i = 0; i < n; ++i) proj += e.vectors[i * n + k] * b[i];
    proj /= std::max(e.values[k], floor);
    for (std::size_t i = 0; i < n; ++i) x[i] += proj * e.vectors[i * n + k];
  }
  return x;
}

}  // namespace pathpol::detail

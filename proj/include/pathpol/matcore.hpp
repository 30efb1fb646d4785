#pragma once

// Dense complex linear algebra on the two sizes this library needs:
// 4x4 joint path-polarization matrices and their 2x2 reductions.
// Hermitian decomposition, traces, partial trace over polarization,
// a cyclic Jacobi eigensolver, and spectral exp / sqrt.
//
// Everything is a pure function on small value types; no shared state
// apart from the single Hermiticity tolerance knob below.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>

#include "pathpol/errors.hpp"

namespace pathpol {

using Complex = std::complex<double>;

// Relative Hermiticity tolerance, applied uniformly by every check in the
// library. One knob; the CLI exposes it as --herm-tol.
inline double& hermiticity_tolerance() {
  static double tol = 1e-10;
  return tol;
}

// Real square matrix, row-major.
template <std::size_t N>
struct RMat {
  static_assert(N == 2 || N == 3 || N == 4, "fixed small sizes only");
  std::array<double, N * N> a{};

  double& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

  static RMat zero() { return RMat{}; }
  static RMat identity() {
    RMat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  RMat transpose() const {
    RMat t;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
  }
};

// Complex square matrix, row-major, over the fixed ordered basis
// {|1,H>, |1,V>, |2,H>, |2,V>} when N == 4 (path is the outer index).
template <std::size_t N>
struct CMat {
  static_assert(N == 2 || N == 4, "fixed sizes only");
  std::array<Complex, N * N> a{};

  Complex& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
  Complex operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

  static CMat zero() { return CMat{}; }
  static CMat identity() {
    CMat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }
  static CMat diag(const std::array<double, N>& d) {
    CMat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  CMat adjoint() const {
    CMat t;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
  }

  CMat conjugate() const {
    CMat t = *this;
    for (auto& v : t.a) v = std::conj(v);
    return t;
  }

  Complex trace() const {
    Complex s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += (*this)(i, i);
    return s;
  }

  double frobenius() const {
    double s = 0.0;
    for (const Complex& v : a) s += std::norm(v);
    return std::sqrt(s);
  }

  bool is_finite() const {
    for (const Complex& v : a)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }
};

using CMat2 = CMat<2>;
using CMat4 = CMat<4>;

template <std::size_t N>
CMat<N> operator+(const CMat<N>& x, const CMat<N>& y) {
  CMat<N> r;
  for (std::size_t k = 0; k < N * N; ++k) r.a[k] = x.a[k] + y.a[k];
  return r;
}

template <std::size_t N>
CMat<N> operator-(const CMat<N>& x, const CMat<N>& y) {
  CMat<N> r;
  for (std::size_t k = 0; k < N * N; ++k) r.a[k] = x.a[k] - y.a[k];
  return r;
}

template <std::size_t N>
CMat<N> operator*(const CMat<N>& x, const CMat<N>& y) {
  CMat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const Complex xik = x(i, k);
      if (xik == Complex{}) continue;
      for (std::size_t j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

template <std::size_t N>
CMat<N> operator*(Complex c, const CMat<N>& x) {
  CMat<N> r;
  for (std::size_t k = 0; k < N * N; ++k) r.a[k] = c * x.a[k];
  return r;
}

template <std::size_t N>
CMat<N> operator*(double c, const CMat<N>& x) {
  return Complex(c, 0.0) * x;
}

// Kronecker product with the first factor as the outer (path) index.
inline CMat4 kron(const CMat2& x, const CMat2& y) {
  CMat4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          r(2 * i + k, 2 * j + l) = x(i, j) * y(k, l);
  return r;
}

// ||m - m^dagger||_F relative to ||m||_F (0 for the zero matrix).
template <std::size_t N>
double hermiticity_residual(const CMat<N>& m) {
  double num = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      num += std::norm(m(i, j) - std::conj(m(j, i)));
  const double scale = m.frobenius();
  return scale > 0.0 ? std::sqrt(num) / scale : 0.0;
}

template <std::size_t N>
void require_hermitian(const CMat<N>& m) {
  if (!m.is_finite()) throw NonHermitianInput(std::nan(""));
  const double r = hermiticity_residual(m);
  if (r > hermiticity_tolerance()) throw NonHermitianInput(r);
}

// Unique split of a Hermitian matrix into a real symmetric part and a real
// antisymmetric part, m = sym + i*antisym. For N == 4 the symmetric part
// carries 10 independent real parameters and the antisymmetric part 6.
template <std::size_t N>
struct SectorPair {
  RMat<N> sym;      // A = A^T
  RMat<N> antisym;  // N = -N^T, zero diagonal

  static constexpr std::size_t sym_parameter_count() { return N * (N + 1) / 2; }
  static constexpr std::size_t antisym_parameter_count() { return N * (N - 1) / 2; }

  // Index pairs of the free entries (upper triangle incl. / excl. diagonal).
  static std::array<std::pair<std::size_t, std::size_t>, N*(N + 1) / 2> sym_free_entries() {
    std::array<std::pair<std::size_t, std::size_t>, N*(N + 1) / 2> out{};
    std::size_t k = 0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i; j < N; ++j) out[k++] = {i, j};
    return out;
  }
  static std::array<std::pair<std::size_t, std::size_t>, N*(N - 1) / 2> antisym_free_entries() {
    std::array<std::pair<std::size_t, std::size_t>, N*(N - 1) / 2> out{};
    std::size_t k = 0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j) out[k++] = {i, j};
    return out;
  }

  CMat<N> reconstruct() const {
    CMat<N> m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        m(i, j) = Complex(sym(i, j), antisym(i, j));
    return m;
  }
};

template <std::size_t N>
SectorPair<N> hermitian_split(const CMat<N>& m) {
  require_hermitian(m);
  SectorPair<N> p;
  for (std::size_t i = 0; i < N; ++i) {
    p.sym(i, i) = m(i, i).real();
    p.antisym(i, i) = 0.0;
    for (std::size_t j = i + 1; j < N; ++j) {
      p.sym(i, j) = p.sym(j, i) = 0.5 * (m(i, j).real() + m(j, i).real());
      const double n = 0.5 * (m(i, j).imag() - m(j, i).imag());
      p.antisym(i, j) = n;
      p.antisym(j, i) = -n;
    }
  }
  return p;
}

// Tr(a b). For real symmetric a and real antisymmetric b this vanishes,
// which is what decouples the two sectors of the state.
template <std::size_t N>
Complex trace_product(const CMat<N>& x, const CMat<N>& y) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) s += x(i, k) * y(k, i);
  return s;
}

template <std::size_t N>
double trace_product(const RMat<N>& x, const RMat<N>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) s += x(i, k) * y(k, i);
  return s;
}

// Trace over the polarization (inner) index of the ordered product basis:
// out(i,j) = m(2i, 2j) + m(2i+1, 2j+1).
inline CMat2 partial_trace_pol(const CMat4& m) {
  CMat2 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      r(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  return r;
}

template <std::size_t N>
struct Spectrum {
  std::array<double, N> eigenvalues;  // sorted descending
  CMat<N> eigenvectors;               // orthonormal columns, same order
};

// Cyclic Jacobi with complex Givens rotations. Fixed tiny dimensions make
// this simple and robust; convergence is quadratic and a handful of sweeps
// reaches the machine-precision floor.
template <std::size_t N>
Spectrum<N> eig_hermitian(const CMat<N>& m) {
  require_hermitian(m);

  // Work on an exactly Hermitian copy so rotations preserve the structure.
  CMat<N> a;
  for (std::size_t i = 0; i < N; ++i) {
    a(i, i) = Complex(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < N; ++j) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  CMat<N> v = CMat<N>::identity();

  const double scale = a.frobenius();
  const double tol = 1e-14 * scale;
  const double skip = tol / (2.0 * N);

  auto offdiag = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  bool converged = scale == 0.0;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    if (offdiag() <= tol) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= skip) continue;

        const Complex alpha = apq / r;  // phases out the pivot
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double sgn = tau >= 0.0 ? 1.0 : -1.0;
        const double t = sgn / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // U differs from identity only in the (p,q) plane:
        //   U(p,p) = c*alpha, U(p,q) = s*alpha, U(q,p) = -s, U(q,q) = c.
        const Complex ca = c * alpha;
        const Complex sa = s * alpha;
        for (std::size_t k = 0; k < N; ++k) {  // A <- A U
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = ca * akp - s * akq;
          a(k, q) = sa * akp + c * akq;
        }
        for (std::size_t k = 0; k < N; ++k) {  // A <- U^dagger A
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(ca) * apk - s * aqk;
          a(q, k) = std::conj(sa) * apk + c * aqk;
        }
        for (std::size_t k = 0; k < N; ++k) {  // V <- V U
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = ca * vkp - s * vkq;
          v(k, q) = sa * vkp + c * vkq;
        }
        a(p, q) = a(q, p) = 0.0;  // annihilated by construction
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);
      }
    }
    if (offdiag() <= tol) converged = true;
  }
  if (!converged) throw NoConvergence("Jacobi eigensolver hit the sweep cap");

  std::array<std::size_t, N> order{};
  for (std::size_t i = 0; i < N; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });

  Spectrum<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out.eigenvalues[i] = a(order[i], order[i]).real();
    for (std::size_t k = 0; k < N; ++k) out.eigenvectors(k, i) = v(k, order[i]);
  }
  return out;
}

// U f(Lambda) U^dagger for a function given as mapped eigenvalues.
template <std::size_t N>
CMat<N> compose_spectral(const Spectrum<N>& s, const std::array<double, N>& f) {
  CMat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < N; ++k)
        acc += s.eigenvectors(i, k) * f[k] * std::conj(s.eigenvectors(j, k));
      r(i, j) = acc;
    }
  return r;
}

// exp(m) for Hermitian m through the spectral decomposition; exact up to
// eigensolver error, result Hermitian positive definite.
template <std::size_t N>
CMat<N> mat_exp_hermitian(const CMat<N>& m) {
  const Spectrum<N> s = eig_hermitian(m);
  std::array<double, N> f{};
  for (std::size_t i = 0; i < N; ++i) f[i] = std::exp(s.eigenvalues[i]);
  return compose_spectral(s, f);
}

// Principal square root of a PSD Hermitian matrix. Eigenvalues in
// [-1e-10, 0) are rounding debris and are clamped to zero, as are positive
// values at debris scale: taking sqrt of an O(eps) eigenvalue would plant
// O(sqrt(eps)) artifacts in the root of a singular matrix.
template <std::size_t N>
CMat<N> mat_sqrt_psd(const CMat<N>& m) {
  const Spectrum<N> s = eig_hermitian(m);
  const double top = std::max(s.eigenvalues[0], 0.0);
  std::array<double, N> f{};
  for (std::size_t i = 0; i < N; ++i) {
    const double v = s.eigenvalues[i];
    if (v < -1e-10) throw NotPSD(v);
    f[i] = v <= top * 1e-14 ? 0.0 : std::sqrt(v);
  }
  return compose_spectral(s, f);
}

}  // namespace pathpol

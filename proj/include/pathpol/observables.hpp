#pragma once

// The 16-element Pauli tensor basis sigma_mu (path) x sigma_nu (polarization),
// its symmetric/antisymmetric classification in the ordered product basis,
// general Hermitian observables over it, and expectation values.
//
// Classification rule: sigma_0, sigma_1, sigma_3 are real symmetric and
// sigma_2 is imaginary antisymmetric, so a tensor is S when zero or two
// factors equal sigma_2 and A when exactly one does. That yields 10 S
// tensors and 6 A tensors.

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "pathpol/matcore.hpp"

namespace pathpol {

enum class Sector { S, A };

// Pauli matrices in the fixed convention every sign in this library
// depends on: sigma_1 = [[0,1],[1,0]], sigma_2 = [[0,-i],[i,0]],
// sigma_3 = [[1,0],[0,-1]], sigma_0 = I. Stored, never recomputed.
inline const CMat2& pauli(int mu) {
  static const std::array<CMat2, 4> table = [] {
    std::array<CMat2, 4> t{};
    t[0] = CMat2::identity();
    t[1](0, 1) = 1.0;
    t[1](1, 0) = 1.0;
    t[2](0, 1) = Complex(0.0, -1.0);
    t[2](1, 0) = Complex(0.0, 1.0);
    t[3](0, 0) = 1.0;
    t[3](1, 1) = -1.0;
    return t;
  }();
  return table.at(static_cast<std::size_t>(mu));
}

struct PauliTensor {
  int mu = 0;  // path index, 0..3
  int nu = 0;  // polarization index, 0..3
  Sector sector = Sector::S;
  CMat4 matrix;
};

inline const std::array<PauliTensor, 16>& pauli_tensors() {
  static const std::array<PauliTensor, 16> table = [] {
    std::array<PauliTensor, 16> t{};
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        PauliTensor& e = t[4 * mu + nu];
        e.mu = mu;
        e.nu = nu;
        const bool a_mu = (mu == 2), a_nu = (nu == 2);
        e.sector = (a_mu != a_nu) ? Sector::A : Sector::S;
        e.matrix = kron(pauli(mu), pauli(nu));
      }
    return t;
  }();
  return table;
}

inline const PauliTensor& pauli_tensor(int mu, int nu) {
  if (mu < 0 || mu > 3 || nu < 0 || nu > 3)
    throw BadParameter("Pauli tensor indices must lie in 0..3");
  return pauli_tensors()[static_cast<std::size_t>(4 * mu + nu)];
}

// Hermitian observable O = sum c_{mu nu} sigma_mu x sigma_nu with real
// coefficients, stored both ways. coefficients[4*mu + nu] holds c_{mu nu}.
struct Observable {
  std::array<double, 16> coefficients{};
  CMat4 matrix;

  static Observable from_coefficients(const std::array<double, 16>& c) {
    Observable o;
    o.coefficients = c;
    for (int k = 0; k < 16; ++k) {
      if (c[static_cast<std::size_t>(k)] == 0.0) continue;
      o.matrix = o.matrix + c[static_cast<std::size_t>(k)] * pauli_tensors()[static_cast<std::size_t>(k)].matrix;
    }
    return o;
  }

  // c_{mu nu} = Tr(O sigma_mu x sigma_nu) / 4; the tensors are trace-
  // orthogonal with Tr(t t') = 4 delta.
  static Observable from_matrix(const CMat4& m) {
    require_hermitian(m);
    Observable o;
    o.matrix = m;
    for (int k = 0; k < 16; ++k)
      o.coefficients[static_cast<std::size_t>(k)] =
          0.25 * trace_product(m, pauli_tensors()[static_cast<std::size_t>(k)].matrix).real();
    return o;
  }

  static Observable single(int mu, int nu) {
    const PauliTensor& t = pauli_tensor(mu, nu);
    Observable o;
    o.coefficients[static_cast<std::size_t>(4 * mu + nu)] = 1.0;
    o.matrix = t.matrix;
    return o;
  }

  // CLI spelling "s<mu><nu>", e.g. "s12".
  static Observable from_name(std::string_view name) {
    if (name.size() != 3 || name[0] != 's' || name[1] < '0' || name[1] > '3' ||
        name[2] < '0' || name[2] > '3')
      throw BadParameter("observable name must be s<mu><nu> with digits 0..3, got '" +
                         std::string(name) + "'");
    return single(name[1] - '0', name[2] - '0');
  }
};

// O = O_S + i O_A with O_S real symmetric (spanned by the 10 S tensors)
// and O_A real antisymmetric (spanned by the 6 A tensors).
inline SectorPair<4> sector_components(const Observable& o) {
  return hermitian_split(o.matrix);
}

// Tr(rho O), asserted real and cross-checked against the decoupled sector
// route Tr(A O_S) - Tr(N O_A).
inline double expectation(const CMat4& rho, const Observable& o) {
  const Complex t = trace_product(rho, o.matrix);
  const double scale = std::max(1.0, o.matrix.frobenius());
  if (std::abs(t.imag()) > 1e-12 * scale) throw NonRealExpectation(t.imag());

  const SectorPair<4> state = hermitian_split(rho);
  const SectorPair<4> obs = hermitian_split(o.matrix);
  const double decoupled =
      trace_product(state.sym, obs.sym) - trace_product(state.antisym, obs.antisym);
  if (std::abs(t.real() - decoupled) > 1e-12 * scale)
    throw Error("expectation value disagrees with its sector decomposition");
  return t.real();
}

}  // namespace pathpol

#pragma once

// Joint and reduced path-polarization states: validation, the nine named
// preset families, Bloch and Fano parametrizations, and seeded Ginibre
// sampling of random density matrices.

#include <array>
#include <cmath>
#include <cstdint>

#include "pathpol/matcore.hpp"
#include "pathpol/observables.hpp"
#include "pathpol/rng.hpp"

namespace pathpol {

// A 4x4 coherence matrix: Hermitian, positive, unit trace, over the ordered
// basis {|1,H>, |1,V>, |2,H>, |2,V>}. Construction goes through validate(),
// so holding a JointState certifies the invariants.
class JointState {
 public:
  const CMat4& matrix() const { return m_; }

  // Hermiticity at the library tolerance, trace renormalized only when
  // |Tr - 1| <= 1e-6 (benign serialization rounding), minimum eigenvalue
  // >= -1e-10.
  static JointState validate(const CMat4& m) {
    require_hermitian(m);
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > 1e-6) throw BadTrace(tr);
    CMat4 n = (1.0 / tr) * m;
    const auto spec = eig_hermitian(n);
    const double min_eig = spec.eigenvalues[3];
    if (min_eig < -1e-10) throw NotPositive(min_eig);
    return JointState(n);
  }

 private:
  explicit JointState(const CMat4& m) : m_(m) {}
  CMat4 m_;
};

inline JointState validate(const CMat4& m) { return JointState::validate(m); }

// Reduced path state with its Bloch vector r = (V_A, V_N, P).
struct PathState {
  CMat2 matrix;
  std::array<double, 3> bloch{};

  // rho = (I + r.sigma)/2; requires |r| <= 1 + 1e-10.
  static PathState from_bloch(const std::array<double, 3>& r) {
    const double n2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    if (n2 > 1.0 + 1e-10) throw NotPositive(0.5 * (1.0 - std::sqrt(n2)));
    PathState p;
    p.bloch = r;
    p.matrix(0, 0) = 0.5 * (1.0 + r[2]);
    p.matrix(1, 1) = 0.5 * (1.0 - r[2]);
    p.matrix(0, 1) = Complex(0.5 * r[0], -0.5 * r[1]);
    p.matrix(1, 0) = Complex(0.5 * r[0], 0.5 * r[1]);
    return p;
  }
};

// rho_cam = Tr_pol rho; bloch_i = Tr(rho_cam sigma_i).
inline PathState reduce_path(const JointState& s) {
  PathState p;
  p.matrix = partial_trace_pol(s.matrix());
  for (int i = 0; i < 3; ++i)
    p.bloch[static_cast<std::size_t>(i)] = trace_product(p.matrix, pauli(i + 1)).real();
  return p;
}

// Fano parametrization: marginal Bloch vectors and the 3x3 correlation
// tensor T_ij = Tr(rho sigma_i x sigma_j).
struct FanoForm {
  std::array<double, 3> r_cam{};
  std::array<double, 3> r_pol{};
  RMat<3> T;
};

inline FanoForm to_fano(const JointState& s) {
  FanoForm f;
  const CMat4& rho = s.matrix();
  for (int i = 0; i < 3; ++i) {
    f.r_cam[static_cast<std::size_t>(i)] =
        trace_product(rho, pauli_tensor(i + 1, 0).matrix).real();
    f.r_pol[static_cast<std::size_t>(i)] =
        trace_product(rho, pauli_tensor(0, i + 1).matrix).real();
    for (int j = 0; j < 3; ++j)
      f.T(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          trace_product(rho, pauli_tensor(i + 1, j + 1).matrix).real();
  }
  return f;
}

// rho = (I x I + r_cam.sigma x I + I x r_pol.sigma + sum T_ij sigma_i x sigma_j)/4.
// Positivity is checked on the assembled matrix.
inline JointState from_fano(const FanoForm& f) {
  CMat4 rho = CMat4::identity();
  for (int i = 0; i < 3; ++i) {
    rho = rho + f.r_cam[static_cast<std::size_t>(i)] * pauli_tensor(i + 1, 0).matrix;
    rho = rho + f.r_pol[static_cast<std::size_t>(i)] * pauli_tensor(0, i + 1).matrix;
    for (int j = 0; j < 3; ++j)
      rho = rho + f.T(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) *
                      pauli_tensor(i + 1, j + 1).matrix;
  }
  return validate(0.25 * rho);
}

// The named state families of the closed-form catalogue. Angles are radians;
// the Werner weight p lies in [0, 1].
struct StatePreset {
  enum class Kind {
    ProductPure,            // |1,H>
    PathSuperposition,      // (cos a |1> + sin a e^{ib} |2>) x |H>
    PolarizedSuperposition, // (|1> + e^{i phi} |2>)/sqrt2 x (cos th |H> + sin th |V>)
    PartiallyEntangled,     // cos chi |1,H> + sin chi |2,V>
    Bell,                   // (|1,H> + |2,V>)/sqrt2
    Werner,                 // p |Bell><Bell| + (1-p) I/4
    MaximallyMixed          // I/4
  };

  Kind kind = Kind::MaximallyMixed;
  double a = 0.0;  // alpha / phi / chi / p, by kind
  double b = 0.0;  // beta / theta, by kind

  static StatePreset product_pure() { return {Kind::ProductPure, 0.0, 0.0}; }
  static StatePreset path_superposition(double alpha, double beta) {
    return {Kind::PathSuperposition, alpha, beta};
  }
  static StatePreset polarized_superposition(double phi, double theta) {
    return {Kind::PolarizedSuperposition, phi, theta};
  }
  static StatePreset partially_entangled(double chi) {
    return {Kind::PartiallyEntangled, chi, 0.0};
  }
  static StatePreset bell() { return {Kind::Bell, 0.0, 0.0}; }
  static StatePreset werner(double p) { return {Kind::Werner, p, 0.0}; }
  static StatePreset maximally_mixed() { return {Kind::MaximallyMixed, 0.0, 0.0}; }
};

namespace detail {
inline CMat4 pure_state(const std::array<Complex, 4>& amp) {
  CMat4 rho;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) rho(i, j) = amp[i] * std::conj(amp[j]);
  return rho;
}
}  // namespace detail

inline JointState from_preset(const StatePreset& preset) {
  using Kind = StatePreset::Kind;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (preset.kind) {
    case Kind::ProductPure:
      return validate(detail::pure_state({1.0, 0.0, 0.0, 0.0}));
    case Kind::PathSuperposition: {
      if (!std::isfinite(preset.a) || !std::isfinite(preset.b))
        throw BadParameter("path superposition angles must be finite");
      const Complex phase = std::polar(1.0, preset.b);
      return validate(detail::pure_state(
          {std::cos(preset.a), 0.0, std::sin(preset.a) * phase, 0.0}));
    }
    case Kind::PolarizedSuperposition: {
      if (!std::isfinite(preset.a) || !std::isfinite(preset.b))
        throw BadParameter("polarized superposition angles must be finite");
      const Complex phase = std::polar(1.0, preset.a);
      const double ch = std::cos(preset.b), sh = std::sin(preset.b);
      return validate(detail::pure_state({inv_sqrt2 * ch, inv_sqrt2 * sh,
                                          inv_sqrt2 * phase * ch,
                                          inv_sqrt2 * phase * sh}));
    }
    case Kind::PartiallyEntangled: {
      if (!std::isfinite(preset.a))
        throw BadParameter("entanglement angle must be finite");
      return validate(
          detail::pure_state({std::cos(preset.a), 0.0, 0.0, std::sin(preset.a)}));
    }
    case Kind::Bell:
      return validate(detail::pure_state({inv_sqrt2, 0.0, 0.0, inv_sqrt2}));
    case Kind::Werner: {
      const double p = preset.a;
      if (!(p >= 0.0 && p <= 1.0))
        throw BadParameter("Werner weight must lie in [0, 1]");
      const CMat4 bell = detail::pure_state({inv_sqrt2, 0.0, 0.0, inv_sqrt2});
      return validate(p * bell + (0.25 * (1.0 - p)) * CMat4::identity());
    }
    case Kind::MaximallyMixed:
      return validate(0.25 * CMat4::identity());
  }
  throw BadParameter("unknown preset kind");
}

// rho = G G^dagger / Tr(G G^dagger) with G a 4x4 matrix of standard complex
// Gaussians (unit variance per real component). PSD by construction;
// bit-reproducible for a fixed generator state.
inline JointState sample_ginibre(Xoshiro256pp& rng) {
  CMat4 g;
  for (auto& entry : g.a) {
    const auto [re, im] = rng.next_gaussian_pair();
    entry = Complex(re, im);
  }
  const CMat4 w = g * g.adjoint();
  return validate((1.0 / w.trace().real()) * w);
}

inline JointState sample_ginibre(std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  return sample_ginibre(rng);
}

inline double expectation(const JointState& s, const Observable& o) {
  return expectation(s.matrix(), o);
}

}  // namespace pathpol

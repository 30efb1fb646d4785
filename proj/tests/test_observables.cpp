#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "pathpol/observables.hpp"
#include "pathpol/rng.hpp"
#include "pathpol/states.hpp"

using namespace pathpol;

namespace {

Observable random_observable(Xoshiro256pp& rng) {
  std::array<double, 16> c{};
  for (double& v : c) v = rng.next_symmetric();
  return Observable::from_coefficients(c);
}

bool is_real_symmetric(const CMat4& m) {
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      if (std::abs(m(i, j).imag()) > 0.0) return false;
      if (m(i, j).real() != m(j, i).real()) return false;
    }
  return true;
}

bool is_imaginary_antisymmetric(const CMat4& m) {
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      if (std::abs(m(i, j).real()) > 0.0) return false;
      if (m(i, j).imag() != -m(j, i).imag()) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("the sixteen Pauli tensors and their sector census") {
  int s_count = 0, a_count = 0;
  for (const PauliTensor& t : pauli_tensors()) {
    // the sector label must match the matrix structure cell by cell
    if (t.sector == Sector::S) {
      ++s_count;
      CHECK(is_real_symmetric(t.matrix));
    } else {
      ++a_count;
      CHECK(is_imaginary_antisymmetric(t.matrix));
    }
    // and the matrices themselves must be the literal tensor products
    CHECK((t.matrix - oracles::sigma_tensor(t.mu, t.nu)).frobenius() == 0.0);
  }
  CHECK(s_count == 10);
  CHECK(a_count == 6);

  CHECK(pauli_tensor(2, 2).sector == Sector::S);
  CHECK(pauli_tensor(0, 2).sector == Sector::A);
  CHECK(pauli_tensor(3, 3).sector == Sector::S);
  CHECK(pauli_tensor(2, 0).sector == Sector::A);
  CHECK_THROWS_AS(pauli_tensor(4, 0), BadParameter);
}

TEST_CASE("tensor trace orthogonality") {
  for (const PauliTensor& x : pauli_tensors())
    for (const PauliTensor& y : pauli_tensors()) {
      const double expected = (x.mu == y.mu && x.nu == y.nu) ? 4.0 : 0.0;
      CHECK(trace_product(x.matrix, y.matrix).real() ==
            Catch::Approx(expected).margin(1e-15));
      CHECK(std::abs(trace_product(x.matrix, y.matrix).imag()) <= 1e-15);
    }
}

TEST_CASE("expectation values on canonical states") {
  CHECK(expectation(from_preset(StatePreset::maximally_mixed()),
                    Observable::single(3, 0)) == Catch::Approx(0.0).margin(1e-15));
  const auto case2 = from_preset(StatePreset::path_superposition(M_PI / 4.0, 0.0));
  CHECK(expectation(case2, Observable::single(1, 0)) == Catch::Approx(1.0));
  const auto case3 =
      from_preset(StatePreset::path_superposition(M_PI / 4.0, M_PI / 2.0));
  CHECK(expectation(case3, Observable::single(2, 0)) == Catch::Approx(1.0));
}

TEST_CASE("sector components split observables cleanly") {
  SECTION("mixed product has no symmetric part") {
    const auto p = sector_components(Observable::single(2, 0));
    CHECK(p.sym.frobenius() == 0.0);
    CHECK(p.antisym.frobenius() > 0.0);
  }
  SECTION("sigma_2 x sigma_2 is symmetric") {
    const auto p = sector_components(Observable::single(2, 2));
    CHECK(p.antisym.frobenius() == 0.0);
  }
  SECTION("identity is symmetric") {
    const auto p = sector_components(Observable::single(0, 0));
    CHECK(p.antisym.frobenius() == 0.0);
  }
  SECTION("coefficient cross-check: O_S spans the S cells, O_A the A cells") {
    Xoshiro256pp rng(606);
    for (int it = 0; it < 100; ++it) {
      const Observable o = random_observable(rng);
      const auto parts = sector_components(o);
      CMat4 from_s, from_a;
      for (int k = 0; k < 16; ++k) {
        const PauliTensor& t = pauli_tensors()[static_cast<std::size_t>(k)];
        const double c = o.coefficients[static_cast<std::size_t>(k)];
        if (t.sector == Sector::S)
          from_s = from_s + c * t.matrix;
        else
          from_a = from_a + c * t.matrix;
      }
      // from_s is real symmetric and equals O_S; from_a equals i * O_A
      CMat4 sym_c, asym_c;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
          sym_c(i, j) = parts.sym(i, j);
          asym_c(i, j) = Complex(0.0, parts.antisym(i, j));
        }
      CHECK((from_s - sym_c).frobenius() <= 1e-13 * std::max(1.0, o.matrix.frobenius()));
      CHECK((from_a - asym_c).frobenius() <= 1e-13 * std::max(1.0, o.matrix.frobenius()));
      // and the observable reconstructs from its coefficients
      CHECK((sym_c + asym_c - o.matrix).frobenius() <= 1e-13);
    }
  }
}

TEST_CASE("decoupling identity on random state/observable pairs") {
  Xoshiro256pp rng(707);
  for (int it = 0; it < 1000; ++it) {
    const JointState s = sample_ginibre(rng);
    const Observable o = random_observable(rng);

    // oracle route: split both by hand and combine the real trace products
    const auto state = hermitian_split(s.matrix());
    const auto obs = hermitian_split(o.matrix);
    const double decoupled =
        trace_product(state.sym, obs.sym) - trace_product(state.antisym, obs.antisym);
    const Complex direct = oracles::trace_of_product(s.matrix(), o.matrix);

    CHECK(std::abs(direct.real() - decoupled) <= 1e-12 * o.matrix.frobenius());
    CHECK(std::abs(direct.imag()) <= 1e-12 * o.matrix.frobenius());
    CHECK(expectation(s, o) == Catch::Approx(direct.real()).margin(1e-12));
  }
}

TEST_CASE("A-sector observables vanish on real symmetric states") {
  Xoshiro256pp rng(808);
  for (int it = 0; it < 100; ++it) {
    // force the antisymmetric sector of a random state to zero; the real
    // part of a density matrix is again a density matrix
    const JointState s = sample_ginibre(rng);
    const auto split = hermitian_split(s.matrix());
    CMat4 real_only;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) real_only(i, j) = split.sym(i, j);
    const JointState symmetric_state = validate(real_only);

    for (const PauliTensor& t : pauli_tensors()) {
      if (t.sector != Sector::A) continue;
      const double e = expectation(symmetric_state, Observable::single(t.mu, t.nu));
      CHECK(std::abs(e) <= 1e-13);
    }
  }
}

TEST_CASE("observable construction round trips") {
  Xoshiro256pp rng(909);
  for (int it = 0; it < 100; ++it) {
    const Observable o = random_observable(rng);
    const Observable back = Observable::from_matrix(o.matrix);
    for (std::size_t k = 0; k < 16; ++k)
      CHECK(back.coefficients[k] == Catch::Approx(o.coefficients[k]).margin(1e-14));
  }
  CHECK(Observable::from_name("s12").matrix.a == pauli_tensor(1, 2).matrix.a);
  CHECK_THROWS_AS(Observable::from_name("s44"), BadParameter);
  CHECK_THROWS_AS(Observable::from_name("x12"), BadParameter);
  CHECK_THROWS_AS(Observable::from_name("s1"), BadParameter);
}

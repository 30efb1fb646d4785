#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "pathpol/channels.hpp"
#include "pathpol/invariants.hpp"
#include "pathpol/states.hpp"

using namespace pathpol;

TEST_CASE("path invariants of the closed-form families") {
  SECTION("unbalanced coherent superposition") {
    for (double a : {0.0, 0.4, M_PI / 4.0, 1.0, M_PI / 2.0})
      for (double b : {0.0, 0.9, M_PI / 2.0, 2.5, 5.9}) {
        const auto inv =
            path_invariants(reduce_path(from_preset(StatePreset::path_superposition(a, b))));
        CHECK(inv.V_A == Catch::Approx(std::sin(2 * a) * std::cos(b)).margin(1e-14));
        CHECK(inv.V_N == Catch::Approx(std::sin(2 * a) * std::sin(b)).margin(1e-14));
        CHECK(inv.P == Catch::Approx(std::cos(2 * a)).margin(1e-14));
        CHECK(inv.I2 <= 1e-14);
      }
  }
  SECTION("maximally mixed") {
    const auto inv =
        path_invariants(reduce_path(from_preset(StatePreset::maximally_mixed())));
    CHECK(inv.V_A == 0.0);
    CHECK(inv.V_N == 0.0);
    CHECK(inv.P == 0.0);
    CHECK(inv.I2 == Catch::Approx(1.0).margin(1e-15));
  }
  SECTION("dephased polarized superposition") {
    for (double g : {0.0, 0.1, 0.25, 0.4, 0.5})
      for (double phi : {0.0, M_PI / 3.0, M_PI, 4.0}) {
        const auto s =
            apply(from_preset(StatePreset::polarized_superposition(phi, 0.6)),
                  ChannelSpec::path_dephasing(g));
        const auto inv = path_invariants(reduce_path(s));
        CHECK(inv.V_A == Catch::Approx((1 - 2 * g) * std::cos(phi)).margin(1e-13));
        CHECK(inv.V_N == Catch::Approx((1 - 2 * g) * std::sin(phi)).margin(1e-13));
        CHECK(inv.P == Catch::Approx(0.0).margin(1e-14));
        CHECK(inv.I2 == Catch::Approx(4 * g * (1 - g)).margin(1e-13));
      }
  }
}

TEST_CASE("main identity residual") {
  SECTION("closed-form catalogue stays below 1e-14") {
    const std::vector<JointState> states = {
        from_preset(StatePreset::product_pure()),
        from_preset(StatePreset::path_superposition(M_PI / 4.0, 0.0)),
        from_preset(StatePreset::path_superposition(M_PI / 4.0, M_PI / 2.0)),
        from_preset(StatePreset::path_superposition(0.7, 2.1)),
        from_preset(StatePreset::bell()),
        from_preset(StatePreset::partially_entangled(0.5)),
        from_preset(StatePreset::maximally_mixed()),
        apply(from_preset(StatePreset::polarized_superposition(1.1, 0.4)),
              ChannelSpec::path_dephasing(0.3)),
        from_preset(StatePreset::werner(0.6)),
    };
    for (const auto& s : states)
      CHECK(main_identity_residual(reduce_path(s)) <= 1e-14);
  }
  SECTION("random states stay below 1e-12") {
    Xoshiro256pp rng(123);
    for (int it = 0; it < 1000; ++it)
      CHECK(main_identity_residual(reduce_path(sample_ginibre(rng))) <= 1e-12);
  }
  SECTION("pure Bloch vector gives zero mixedness") {
    const PathState p = PathState::from_bloch({0.6, 0.0, 0.8});
    CHECK(main_identity_residual(p) <= 1e-15);
    CHECK(path_invariants(p).I2 <= 1e-15);
  }
}

TEST_CASE("the three mixedness routes agree") {
  Xoshiro256pp rng(321);
  for (int it = 0; it < 1000; ++it) {
    const MixednessRoutes m = mixedness_routes(reduce_path(sample_ginibre(rng)));
    CHECK(std::abs(m.bloch - m.det) <= 1e-12);
    CHECK(std::abs(m.bloch - m.purity) <= 1e-12);
    CHECK(std::abs(m.det - m.purity) <= 1e-12);
  }
}

TEST_CASE("concurrence") {
  SECTION("partially entangled family: C = sin(2 chi)") {
    for (double chi : {0.0, 0.2, 0.5, M_PI / 4.0, 1.2, M_PI / 2.0}) {
      const double c = concurrence(from_preset(StatePreset::partially_entangled(chi)));
      CHECK(c == Catch::Approx(std::abs(std::sin(2 * chi))).margin(1e-8));
    }
  }
  SECTION("Werner family: C = max{0, (3p-1)/2} with strict C < I below p = 1") {
    for (int k = 0; k <= 20; ++k) {
      const double p = 0.05 * k;
      const JointState s = from_preset(StatePreset::werner(p));
      const double c = concurrence(s);
      CHECK(c == Catch::Approx(std::max(0.0, (3 * p - 1) / 2)).margin(1e-10));
      const double i2 = path_invariants(reduce_path(s)).I2;
      CHECK(i2 == Catch::Approx(1.0).margin(1e-14));
      if (p < 1.0) CHECK(c < std::sqrt(i2));
    }
  }
  SECTION("separable mixed state") {
    CHECK(concurrence(from_preset(StatePreset::maximally_mixed())) <=
          1e-10);
  }
  SECTION("pure states saturate C = I") {
    const std::vector<JointState> pure = {
        from_preset(StatePreset::bell()),
        from_preset(StatePreset::partially_entangled(0.4)),
        from_preset(StatePreset::path_superposition(0.6, 1.0)),
        from_preset(StatePreset::product_pure()),
    };
    for (const auto& s : pure) {
      const InvariantReport r = full_invariants(s);
      REQUIRE(r.mu2 >= 1.0 - 1e-10);  // detected as pure
      CHECK(std::abs(r.C - std::sqrt(r.I2)) <= 1e-8);
    }
  }
  SECTION("mixed states obey C <= I") {
    Xoshiro256pp rng(213);
    for (int it = 0; it < 2000; ++it) {
      const InvariantReport r = full_invariants(sample_ginibre(rng));
      CHECK(r.C <= std::sqrt(r.I2) + 1e-10);
    }
  }
}

TEST_CASE("full invariant report") {
  SECTION("pure states reach the five-invariant ceiling") {
    const std::vector<JointState> pure = {
        from_preset(StatePreset::product_pure()),
        from_preset(StatePreset::path_superposition(1.1, 0.3)),
        from_preset(StatePreset::polarized_superposition(0.8, 0.5)),
        from_preset(StatePreset::partially_entangled(0.7)),
        from_preset(StatePreset::bell()),
    };
    for (const auto& s : pure) {
      const InvariantReport r = full_invariants(s);
      CHECK(4.0 * r.mu2 - 1.0 == Catch::Approx(3.0).margin(1e-12));
      CHECK(r.P_delta == Catch::Approx(1.0).margin(1e-12));
      const double lhs = r.V_A * r.V_A + r.V_N * r.V_N + r.P * r.P +
                         r.P_pol * r.P_pol + r.T_frob * r.T_frob;
      CHECK(lhs == Catch::Approx(3.0).margin(1e-12));
    }
  }
  SECTION("maximally mixed state sits at the floor") {
    const InvariantReport r = full_invariants(from_preset(StatePreset::maximally_mixed()));
    CHECK(r.V_A == 0.0);
    CHECK(r.V_N == 0.0);
    CHECK(r.P == 0.0);
    CHECK(r.P_pol <= 1e-15);
    CHECK(r.T_frob <= 1e-15);
    CHECK(r.P_delta <= 1e-12);
    CHECK(r.P1 <= 1e-12);
    CHECK(r.P2 <= 1e-12);
    CHECK(r.P3 <= 1e-12);
  }
  SECTION("generalized identities on random states, against the trace oracle") {
    Xoshiro256pp rng(132);
    for (int it = 0; it < 2000; ++it) {
      const JointState s = sample_ginibre(rng);
      const InvariantReport r = full_invariants(s);
      CHECK(r.residual_full <= 1e-12);
      CHECK(r.residual_pdelta <= 1e-12);

      // oracle recomputation of the left-hand side from literal traces
      double lhs = 0.0;
      for (int i = 1; i <= 3; ++i) {
        const double rc =
            oracles::trace_of_product(s.matrix(), oracles::sigma_tensor(i, 0)).real();
        const double rp =
            oracles::trace_of_product(s.matrix(), oracles::sigma_tensor(0, i)).real();
        lhs += rc * rc + rp * rp;
        for (int j = 1; j <= 3; ++j) {
          const double t =
              oracles::trace_of_product(s.matrix(), oracles::sigma_tensor(i, j)).real();
          lhs += t * t;
        }
      }
      const double mu2 =
          oracles::trace_of_product(s.matrix(), s.matrix()).real();
      CHECK(std::abs(lhs - (4.0 * mu2 - 1.0)) <= 1e-12);
      CHECK(r.mu2 == Catch::Approx(mu2).margin(1e-13));
    }
  }
  SECTION("report invariants hold on random states") {
    Xoshiro256pp rng(231);
    for (int it = 0; it < 1000; ++it) {
      const InvariantReport r = full_invariants(sample_ginibre(rng));
      CHECK(r.V * r.V ==
            Catch::Approx(r.V_A * r.V_A + r.V_N * r.V_N).margin(1e-12));
      CHECK(r.I2 >= 0.0);
      CHECK(r.I2 <= 1.0);
      CHECK(r.P1 >= 0.0);
      CHECK(r.P2 >= r.P1);
      CHECK(r.P3 >= r.P2);
      CHECK(r.P3 <= 1.0);
      CHECK(r.C <= std::sqrt(r.I2) + 1e-10);
      if (r.V > 0.0)
        CHECK(r.vn_ratio ==
              Catch::Approx(r.V_N * r.V_N / (r.V * r.V)).margin(1e-12));
    }
  }
}

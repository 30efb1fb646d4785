#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pathpol/channels.hpp"
#include "pathpol/interferometry.hpp"
#include "pathpol/invariants.hpp"
#include "pathpol/states.hpp"

using namespace pathpol;

namespace {

PathState random_path_state(Xoshiro256pp& rng) {
  auto [x, y] = rng.next_gaussian_pair();
  const double z = rng.next_gaussian();
  const double norm = std::sqrt(x * x + y * y + z * z);
  const double radius = std::cbrt(rng.next_unit());
  return PathState::from_bloch(
      {radius * x / norm, radius * y / norm, radius * z / norm});
}

Populations exact_populations(const PathState& p) {
  return Populations{0.5 * (1.0 + p.bloch[2]), 0.5 * (1.0 - p.bloch[2])};
}

}  // namespace

TEST_CASE("fringe synthesis follows the interference law") {
  const PathState case2 =
      reduce_path(from_preset(StatePreset::path_superposition(M_PI / 4.0, 0.0)));
  const FringeRecord r2 = synth_fringes(case2, {0.0}, 3.0, 0.0, 1);
  CHECK(r2.intensities[0] == Catch::Approx(6.0));  // I0 (1 + V_A)

  const PathState case3 =
      reduce_path(from_preset(StatePreset::path_superposition(M_PI / 4.0, M_PI / 2.0)));
  const FringeRecord r3 = synth_fringes(case3, {M_PI / 2.0}, 3.0, 0.0, 1);
  CHECK(r3.intensities[0] == Catch::Approx(6.0));  // I0 (1 + V_N)

  const PathState mixed = PathState::from_bloch({0.0, 0.0, 0.0});
  for (double phi : {0.0, 0.3, 1.7, 4.4}) {
    const FringeRecord flat = synth_fringes(mixed, {phi}, 2.5, 0.0, 1);
    CHECK(flat.intensities[0] == Catch::Approx(2.5));
  }

  CHECK_THROWS_AS(synth_fringes(mixed, {0.0}, 0.0, 0.0, 1), BadParameter);
  CHECK_THROWS_AS(synth_fringes(mixed, {0.0}, 1.0, -0.5, 1), BadParameter);

  SECTION("violent noise clamps at zero and counts the clamps") {
    const FringeRecord noisy =
        synth_fringes(mixed, std::vector<double>(200, 0.0), 1.0, 5.0, 99);
    CHECK(noisy.clamp_warnings > 0);
    for (double v : noisy.intensities) CHECK(v >= 0.0);
  }
}

TEST_CASE("four-point extraction on canonical records") {
  SECTION("frozen dephased-superposition case") {
    // gamma = 0.25, phi = pi/3: V_A = 1/4, V_N = sqrt(3)/4, I2 = 3/4
    const JointState s =
        apply(from_preset(StatePreset::polarized_superposition(M_PI / 3.0, 0.8)),
              ChannelSpec::path_dephasing(0.25));
    const PathState p = reduce_path(s);
    const FringeRecord r = synth_fringes(p, canonical_phases(), 1.0, 0.0, 1);
    const ExtractionResult e = extract_four_point(r, exact_populations(p));
    CHECK(e.V_A == Catch::Approx(0.25).margin(1e-13));
    CHECK(e.V_N == Catch::Approx(0.43301270189221932).margin(1e-13));
    CHECK(e.P == Catch::Approx(0.0).margin(1e-14));
    CHECK(e.I2 == Catch::Approx(0.75).margin(1e-13));
    CHECK_FALSE(e.positivity_violation);
  }
  SECTION("full-visibility case") {
    const PathState p =
        reduce_path(from_preset(StatePreset::path_superposition(M_PI / 4.0, 0.0)));
    const FringeRecord r = synth_fringes(p, canonical_phases(), 2.0, 0.0, 1);
    const ExtractionResult e = extract_four_point(r, exact_populations(p));
    CHECK(e.V_A == Catch::Approx(1.0));
    CHECK(e.V_N == Catch::Approx(0.0).margin(1e-14));
    CHECK(e.P == Catch::Approx(0.0).margin(1e-14));
    CHECK(e.I2 == Catch::Approx(0.0).margin(1e-14));
  }
  SECTION("flat record with balanced populations is fully mixed") {
    FringeRecord flat;
    flat.phases = canonical_phases();
    flat.intensities = {1.0, 1.0, 1.0, 1.0};
    const ExtractionResult e = extract_four_point(flat, Populations{0.5, 0.5});
    CHECK(e.V_A == 0.0);
    CHECK(e.V_N == 0.0);
    CHECK(e.P == 0.0);
    CHECK(e.I2 == 1.0);
  }
  SECTION("error paths") {
    FringeRecord missing;
    missing.phases = {0.0, M_PI, 1.5 * M_PI};
    missing.intensities = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(extract_four_point(missing, Populations{1.0, 0.0}), MissingPhase);

    FringeRecord dark;
    dark.phases = canonical_phases();
    dark.intensities = {0.0, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(extract_four_point(dark, Populations{1.0, 0.0}), ZeroDenominator);

    FringeRecord fine;
    fine.phases = canonical_phases();
    fine.intensities = {1.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(extract_four_point(fine, Populations{0.0, 0.0}), ZeroDenominator);
  }
  SECTION("positivity flag under inconsistent inputs") {
    FringeRecord r;
    r.phases = canonical_phases();
    r.intensities = {2.0, 1.0, 0.1, 1.0};  // V_A close to 1
    const ExtractionResult e = extract_four_point(r, Populations{1.0, 0.0});  // P = 1
    CHECK(e.positivity_violation);
    CHECK(e.I2 < 0.0);  // reported unclamped
  }
}

TEST_CASE("least-squares extraction") {
  const PathState p = reduce_path(
      apply(from_preset(StatePreset::polarized_superposition(1.2, 0.5)),
            ChannelSpec::path_dephasing(0.1)));
  const Populations pops = exact_populations(p);

  SECTION("agrees with four-point on the canonical grid") {
    const FringeRecord r = synth_fringes(p, canonical_phases(), 1.0, 0.0, 1);
    const ExtractionResult four = extract_four_point(r, pops);
    const ExtractionResult lsq = extract_least_squares(r, pops);
    CHECK(lsq.V_A == Catch::Approx(four.V_A).margin(1e-12));
    CHECK(lsq.V_N == Catch::Approx(four.V_N).margin(1e-12));
    CHECK(lsq.I2 == Catch::Approx(four.I2).margin(1e-12));
  }
  SECTION("recovers exactly from a uniform eight-point grid") {
    std::vector<double> grid;
    for (int k = 0; k < 8; ++k) grid.push_back(2.0 * M_PI * k / 8.0);
    const FringeRecord r = synth_fringes(p, grid, 2.0, 0.0, 1);
    const ExtractionResult e = extract_least_squares(r, pops);
    CHECK(e.V_A == Catch::Approx(p.bloch[0]).margin(1e-12));
    CHECK(e.V_N == Catch::Approx(p.bloch[1]).margin(1e-12));
  }
  SECTION("rank deficiency is detected") {
    FringeRecord two;
    two.phases = {0.0, M_PI};
    two.intensities = {1.0, 1.0};
    CHECK_THROWS_AS(extract_least_squares(two, pops), RankDeficient);

    FringeRecord aliased;  // sin column vanishes, cos column collapses
    aliased.phases = {0.0, M_PI, 2.0 * M_PI};
    aliased.intensities = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(extract_least_squares(aliased, pops), RankDeficient);
  }
}

TEST_CASE("forward-inverse round trip on random path states") {
  Xoshiro256pp rng(314);
  for (int it = 0; it < 1000; ++it) {
    const PathState p = random_path_state(rng);
    const FringeRecord r = synth_fringes(p, canonical_phases(), 1.0, 0.0, 7);
    const ExtractionResult e = extract_four_point(r, exact_populations(p));
    CHECK(std::abs(e.V_A - p.bloch[0]) <= 1e-12);
    CHECK(std::abs(e.V_N - p.bloch[1]) <= 1e-12);
    CHECK(std::abs(e.P - p.bloch[2]) <= 1e-12);
    // with exact populations the identity closes through the extraction
    CHECK(std::abs(e.V_A * e.V_A + e.V_N * e.V_N + e.P * e.P + e.I2 - 1.0) <= 1e-12);
    CHECK(std::abs(e.I2 - mixedness_routes(p).det) <= 1e-12);
  }
}

TEST_CASE("extraction is pointwise across the screen") {
  // screen position enters as an extra propagation phase; the identity must
  // close independently at every point
  const JointState s =
      apply(from_preset(StatePreset::polarized_superposition(0.4, 0.9)),
            ChannelSpec::path_dephasing(0.2));
  for (int k = 0; k < 16; ++k) {
    const double screen_phase = 2.0 * M_PI * k / 16.0;
    const PathState p =
        reduce_path(apply(s, ChannelSpec::preparatory_phase(screen_phase)));
    const FringeRecord r = synth_fringes(p, canonical_phases(), 1.0, 0.0, 5);
    const ExtractionResult e = extract_four_point(r, exact_populations(p));
    CHECK(std::abs(e.V_A * e.V_A + e.V_N * e.V_N + e.P * e.P + e.I2 - 1.0) <= 1e-12);
  }
}

TEST_CASE("noisy extraction converges to the truth") {
  // sigma = 0.01, many repetitions, fixed seeds: the mean estimate must sit
  // within three standard errors of the exact value
  const JointState s =
      apply(from_preset(StatePreset::polarized_superposition(M_PI / 3.0, 0.2)),
            ChannelSpec::path_dephasing(0.25));
  const PathState p = reduce_path(s);
  const Populations pops = exact_populations(p);

  const int reps = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < reps; ++k) {
    const FringeRecord r =
        synth_fringes(p, canonical_phases(), 1.0, 0.01, 1000 + static_cast<std::uint64_t>(k));
    const double va = extract_four_point(r, pops).V_A;
    sum += va;
    sum_sq += va * va;
  }
  const double mean = sum / reps;
  const double var = (sum_sq - sum * sum / reps) / (reps - 1);
  const double stderr_mean = std::sqrt(var / reps);
  CHECK(std::abs(mean - p.bloch[0]) <= 3.0 * stderr_mean);
}
